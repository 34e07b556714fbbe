// Copyright 2026 The Ninionics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact rationals for statistical angles, the Thomae function, Farey
// enumeration, best rational approximation of doubles and prime generation.
//
// Numerators and denominators are 64-bit. Every product or sum that could
// leave that range is checked and raises std::overflow_error instead of
// wrapping. Cross-multiplied comparisons are carried out in 128 bits.

#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "ninionics/errors.hpp"

namespace ninionics {

using int128 = __int128;

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in addition");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow in subtraction");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
  return r;
}

inline std::int64_t narrow(int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("integer overflow narrowing a 128-bit intermediate");
  return static_cast<std::int64_t>(v);
}

inline int128 abs128(int128 v) { return v < 0 ? -v : v; }

inline int128 gcd128(int128 a, int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// floor(a / b) for b > 0.
inline int128 floor_div(int128 a, int128 b) {
  int128 q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

}  // namespace detail

// Exact rational number p/q in lowest terms with q >= 1. Zero is 0/1.
class ReducedFraction {
 public:
  constexpr ReducedFraction() = default;

  ReducedFraction(std::int64_t num, std::int64_t den) { assign(num, den); }

  static ReducedFraction integer(std::int64_t n) { return ReducedFraction(n, 1); }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_integer() const noexcept { return den_ == 1; }

  double to_double() const noexcept {
    return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
  }

  std::string to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  // Largest integer not exceeding the value.
  std::int64_t floor() const noexcept {
    return static_cast<std::int64_t>(detail::floor_div(num_, den_));
  }

  // Representative of the value modulo an integer period, in [0, period).
  ReducedFraction mod(std::int64_t period) const {
    if (period <= 0) throw domain_error("modulus must be positive");
    const int128 span = static_cast<int128>(period) * den_;
    int128 r = num_ % span;
    if (r < 0) r += span;
    return from_wide(r, den_);
  }

  friend bool operator==(const ReducedFraction&, const ReducedFraction&) = default;

  friend std::strong_ordering operator<=>(const ReducedFraction& a, const ReducedFraction& b) {
    const int128 lhs = static_cast<int128>(a.num_) * b.den_;
    const int128 rhs = static_cast<int128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend ReducedFraction operator-(const ReducedFraction& a) {
    return ReducedFraction(detail::checked_sub(0, a.num_), a.den_);
  }

  friend ReducedFraction operator+(const ReducedFraction& a, const ReducedFraction& b) {
    return from_wide(static_cast<int128>(a.num_) * b.den_ + static_cast<int128>(b.num_) * a.den_,
                     static_cast<int128>(a.den_) * b.den_);
  }

  friend ReducedFraction operator-(const ReducedFraction& a, const ReducedFraction& b) {
    return from_wide(static_cast<int128>(a.num_) * b.den_ - static_cast<int128>(b.num_) * a.den_,
                     static_cast<int128>(a.den_) * b.den_);
  }

  friend ReducedFraction operator*(const ReducedFraction& a, const ReducedFraction& b) {
    return from_wide(static_cast<int128>(a.num_) * b.num_, static_cast<int128>(a.den_) * b.den_);
  }

  friend ReducedFraction operator/(const ReducedFraction& a, const ReducedFraction& b) {
    if (b.num_ == 0) throw domain_error("division by zero fraction");
    return from_wide(static_cast<int128>(a.num_) * b.den_, static_cast<int128>(a.den_) * b.num_);
  }

  friend std::ostream& operator<<(std::ostream& os, const ReducedFraction& f) {
    return os << f.num_ << '/' << f.den_;
  }

  // Builds the canonical form from 128-bit intermediates; throws if the
  // reduced result does not fit 64 bits.
  static ReducedFraction from_wide(int128 num, int128 den) {
    if (den == 0) throw domain_error("denominator zero");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const int128 g = detail::gcd128(num, den);
    ReducedFraction r;
    if (num == 0) return r;
    r.num_ = detail::narrow(num / g);
    r.den_ = detail::narrow(den / g);
    return r;
  }

 private:
  void assign(std::int64_t num, std::int64_t den) { *this = from_wide(num, den); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Canonical lowest-terms form of p/q.
inline ReducedFraction reduce(std::int64_t p, std::int64_t q) {
  if (q == 0) throw domain_error("denominator zero");
  return ReducedFraction(p, q);
}

// Thomae function on exact rationals: 1/q for x = p/q in lowest terms.
inline ReducedFraction thomae(const ReducedFraction& x) { return ReducedFraction(1, x.den()); }

// Mediant (a+c)/(b+d), reduced.
inline ReducedFraction mediant(const ReducedFraction& a, const ReducedFraction& b) {
  return reduce(detail::checked_add(a.num(), b.num()), detail::checked_add(a.den(), b.den()));
}

// b*c - a*d for fractions a/b < c/d; equals 1 for Farey neighbours.
inline int128 farey_determinant(const ReducedFraction& left, const ReducedFraction& right) {
  return static_cast<int128>(left.den()) * right.num() -
         static_cast<int128>(left.num()) * right.den();
}

// Rotation per imaginary-time period, stored as turns chi / 2pi.
class StatAngle {
 public:
  StatAngle() = default;
  explicit StatAngle(ReducedFraction turns) : turns_(turns) {}
  StatAngle(std::int64_t p, std::int64_t q) : turns_(reduce(p, q)) {}

  const ReducedFraction& turns() const noexcept { return turns_; }

  double chi_radians() const noexcept {
    return static_cast<double>(2.0L * std::numbers::pi_v<long double> *
                               static_cast<long double>(turns_.num()) /
                               static_cast<long double>(turns_.den()));
  }

  // Bosonic phases e^{i chi m} have period one turn.
  ReducedFraction bosonic_canonical() const { return turns_.mod(1); }

  // Fermionic phases e^{i chi (m + 1/2)} have period two turns.
  ReducedFraction fermionic_canonical() const { return turns_.mod(2); }

  friend bool operator==(const StatAngle&, const StatAngle&) = default;

 private:
  ReducedFraction turns_;
};

// Reduces a turn count into (-1/2, 1/2].
inline ReducedFraction centered_turns(const ReducedFraction& t) {
  ReducedFraction r = t.mod(1);
  if (r > ReducedFraction(1, 2)) r = r - ReducedFraction::integer(1);
  return r;
}

// Visits the Farey sequence of the given order in ascending order. The
// visitor returns false to stop early.
template <class Visitor>
void for_each_farey(std::int64_t order, Visitor&& visit) {
  if (order < 1) throw domain_error("Farey order must be >= 1");
  std::int64_t a = 0, b = 1, c = 1, d = order;
  if (!visit(ReducedFraction(a, b))) return;
  while (c <= order) {
    if (!visit(ReducedFraction(c, d))) return;
    const std::int64_t k = (order + b) / d;
    const std::int64_t nc = k * c - a;
    const std::int64_t nd = k * d - b;
    a = c;
    b = d;
    c = nc;
    d = nd;
  }
}

inline std::vector<ReducedFraction> farey_sequence(std::int64_t order) {
  std::vector<ReducedFraction> out;
  for_each_farey(order, [&](const ReducedFraction& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

namespace detail {

// Exact dyadic image of x as n / 2^k with |n| < 2^62. Bits below 2^-62 are
// rounded away; that is far below the resolution of any q_max we accept.
struct Dyadic {
  int128 num;
  int128 den;
};

inline Dyadic to_dyadic(double x) {
  int exp2 = 0;
  std::frexp(x, &exp2);
  const int shift = std::min(62, 61 - exp2);
  if (shift < 0) throw domain_error("value too large for rational approximation");
  const double scaled = std::nearbyint(std::ldexp(x, shift));
  return {static_cast<int128>(static_cast<std::int64_t>(scaled)), static_cast<int128>(1) << shift};
}

}  // namespace detail

// Best rational approximation with denominator <= q_max: minimises |x - p/q|
// over continued-fraction convergents and semiconvergents. Equal distances
// resolve toward the smaller denominator, then the smaller value.
inline ReducedFraction approximate_rational(double x, std::int64_t q_max) {
  if (!std::isfinite(x)) throw domain_error("approximate_rational: non-finite input");
  if (q_max < 1) throw domain_error("approximate_rational: q_max must be >= 1");
  const detail::Dyadic d = detail::to_dyadic(x);

  // Continued fraction of n/D with convergents h/k.
  int128 n = d.num, D = d.den;
  int128 h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  ReducedFraction semi;
  bool have_semi = false;
  while (true) {
    const int128 a = detail::floor_div(n, D);
    const int128 k_next = a * k_prev + k_prev2;
    if (k_next > q_max) {
      const int128 t = (q_max - k_prev2) / k_prev;
      if (t >= 1) {
        semi = ReducedFraction::from_wide(t * h_prev + h_prev2, t * k_prev + k_prev2);
        have_semi = true;
      }
      break;
    }
    const int128 h_next = a * h_prev + h_prev2;
    h_prev2 = h_prev;
    h_prev = h_next;
    k_prev2 = k_prev;
    k_prev = k_next;
    const int128 rem = n - a * D;
    if (rem == 0) break;
    n = D;
    D = rem;
  }
  const ReducedFraction conv = ReducedFraction::from_wide(h_prev, k_prev);
  if (!have_semi) return conv;

  // |x - p/q| compared exactly as |N q - p Dn| / (Dn q).
  auto err_num = [&](const ReducedFraction& f) {
    return detail::abs128(d.num * f.den() - static_cast<int128>(f.num()) * d.den);
  };
  const int128 lhs = err_num(conv) * semi.den();
  const int128 rhs = err_num(semi) * conv.den();
  if (lhs < rhs) return conv;
  if (rhs < lhs) return semi;
  if (conv.den() != semi.den()) return conv.den() < semi.den() ? conv : semi;
  return conv < semi ? conv : semi;
}

// Sieve of Eratosthenes.
inline std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  if (n < 2) throw domain_error("primes_up_to: n must be >= 2");
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  std::vector<std::int64_t> primes;
  for (std::int64_t i = 2; i <= n; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    primes.push_back(i);
    for (std::int64_t j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return primes;
}

// The first `count` primes: P_1 = 2, P_2 = 3, ...
inline std::vector<std::int64_t> first_primes(std::size_t count) {
  if (count == 0) return {};
  // Rosser's bound p_n < n (ln n + ln ln n) for n >= 6.
  const double nd = static_cast<double>(std::max<std::size_t>(count, 6));
  std::int64_t limit = static_cast<std::int64_t>(nd * (std::log(nd) + std::log(std::log(nd)))) + 1;
  std::vector<std::int64_t> p = primes_up_to(std::max<std::int64_t>(limit, 13));
  p.resize(count);
  return p;
}

}  // namespace ninionics

template <>
struct std::hash<ninionics::ReducedFraction> {
  std::size_t operator()(const ninionics::ReducedFraction& f) const noexcept {
    const std::size_t h1 = std::hash<std::int64_t>{}(f.num());
    const std::size_t h2 = std::hash<std::int64_t>{}(f.den());
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};

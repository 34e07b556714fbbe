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

// Fractal datasets of energy and entropy ratios over the statistical angle,
// their Farey/Stern-Brocot self-similarity, and prime-number sequences that
// approach the same angle with different limits.
//
// Ratios are exact rationals (q^-4 and q^-3) and only converted to double at
// the edge. No floating evaluation of the Thomae function happens here.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <tuple>
#include <vector>

#include "ninionics/errors.hpp"
#include "ninionics/rational.hpp"

namespace ninionics::fractal {

struct FractalSample {
  ReducedFraction chi_turns;
  std::int64_t q = 1;
  // (eps / eps_0) = q^-4 and (s / s_0) = q^-3. Empty once q^4 (or q^3)
  // leaves the 64-bit range; the doubles are then rounded from q directly.
  std::optional<ReducedFraction> energy_ratio_exact;
  std::optional<ReducedFraction> entropy_ratio_exact;
  double energy_ratio = 1.0;
  double entropy_ratio = 1.0;
};

namespace detail {

inline std::optional<ReducedFraction> inverse_power(std::int64_t q, int k) {
  std::int64_t v = 1;
  for (int i = 0; i < k; ++i)
    if (__builtin_mul_overflow(v, q, &v)) return std::nullopt;
  return ReducedFraction(1, v);
}

inline double inverse_power_double(std::int64_t q, int k) {
  return static_cast<double>(1.0L / std::pow(static_cast<long double>(q), k));
}

}  // namespace detail

inline FractalSample make_sample(const ReducedFraction& turns) {
  const std::int64_t q = thomae(turns).den();
  FractalSample s{turns, q, detail::inverse_power(q, 4), detail::inverse_power(q, 3), 0.0, 0.0};
  s.energy_ratio = s.energy_ratio_exact ? s.energy_ratio_exact->to_double() : detail::inverse_power_double(q, 4);
  s.entropy_ratio = s.entropy_ratio_exact ? s.entropy_ratio_exact->to_double() : detail::inverse_power_double(q, 3);
  return s;
}

namespace detail {

inline void check_window(const ReducedFraction& lo, const ReducedFraction& hi) {
  const ReducedFraction zero(0, 1), one(1, 1);
  if (lo < zero || hi > one) throw domain_error("scan window must lie inside [0, 1]");
}

}  // namespace detail

// Streams one sample per Farey fraction of `order` inside [lo, hi], in
// ascending order. The visitor may return false to stop.
template <class Visitor>
void for_each_sample(std::int64_t order, const ReducedFraction& lo, const ReducedFraction& hi,
                     Visitor&& visit) {
  if (order < 1) throw domain_error("scan order must be >= 1");
  detail::check_window(lo, hi);
  if (!(lo < hi)) return;
  for_each_farey(order, [&](const ReducedFraction& f) {
    if (f > hi) return false;
    if (f < lo) return true;
    return static_cast<bool>(visit(make_sample(f)));
  });
}

inline std::vector<FractalSample> fractal_scan(std::int64_t order, const ReducedFraction& lo,
                                               const ReducedFraction& hi) {
  std::vector<FractalSample> out;
  for_each_sample(order, lo, hi, [&](const FractalSample& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

struct SelfSimilarityReport {
  std::size_t outer_samples = 0;
  std::size_t zoomed_samples = 0;
  // Samples with equal denominators carry identical ratios (exact and double).
  bool numerator_irrelevant = true;
  // Adjacent samples a/b < c/d satisfy bc - ad = 1.
  bool mediant_property = true;
  // For each adjacent outer pair inside the zoomed window, the first
  // fraction to appear between them at the zoomed order is their mediant.
  bool stern_brocot_descent = true;
  std::size_t descent_pairs_checked = 0;

  bool ok() const { return numerator_irrelevant && mediant_property && stern_brocot_descent; }
};

namespace detail {

inline bool equal_q_equal_ratio(std::span<const FractalSample> s) {
  std::map<std::int64_t, const FractalSample*> seen;
  for (const FractalSample& x : s) {
    auto [it, fresh] = seen.emplace(x.q, &x);
    if (fresh) continue;
    const FractalSample& y = *it->second;
    if (x.energy_ratio_exact != y.energy_ratio_exact || x.entropy_ratio_exact != y.entropy_ratio_exact)
      return false;
    if (x.energy_ratio != y.energy_ratio || x.entropy_ratio != y.entropy_ratio) return false;
  }
  return true;
}

inline bool adjacent_mediant(std::span<const FractalSample> s) {
  for (std::size_t i = 1; i < s.size(); ++i)
    if (farey_determinant(s[i - 1].chi_turns, s[i].chi_turns) != 1) return false;
  return true;
}

}  // namespace detail

// Compares the scan of [lo, hi] at `order` with the scan of the zoomed window
// [lo, lo + (hi - lo) / zoom] at order * zoom.
inline SelfSimilarityReport self_similarity_check(std::int64_t order, const ReducedFraction& lo,
                                                  const ReducedFraction& hi, std::int64_t zoom) {
  if (zoom < 1) throw domain_error("zoom factor must be >= 1");
  const ReducedFraction zhi = lo + (hi - lo) / ReducedFraction::integer(zoom);
  const std::vector<FractalSample> outer = fractal_scan(order, lo, hi);
  const std::vector<FractalSample> inner =
      fractal_scan(ninionics::detail::checked_mul(order, zoom), lo, zhi);

  SelfSimilarityReport r;
  r.outer_samples = outer.size();
  r.zoomed_samples = inner.size();
  r.numerator_irrelevant = detail::equal_q_equal_ratio(outer) && detail::equal_q_equal_ratio(inner);
  r.mediant_property = detail::adjacent_mediant(outer) && detail::adjacent_mediant(inner);

  for (std::size_t i = 1; i < outer.size(); ++i) {
    const ReducedFraction& a = outer[i - 1].chi_turns;
    const ReducedFraction& b = outer[i].chi_turns;
    if (b > zhi) break;
    const FractalSample* first = nullptr;
    for (const FractalSample& s : inner) {
      if (!(s.chi_turns > a && s.chi_turns < b)) continue;
      if (first == nullptr || s.q < first->q) first = &s;
    }
    if (first == nullptr) continue;
    ++r.descent_pairs_checked;
    if (first->chi_turns != mediant(a, b)) r.stern_brocot_descent = false;
  }
  return r;
}

// A fraction within `distance` of x0 whose energy ratio is at least
// `min_factor` times smaller, taken from the Stern-Brocot chain of Farey
// neighbours (c + k p) / (d + k q) converging on x0 = p/q.
struct ContinuityWitness {
  FractalSample at_x0;
  FractalSample nearby;
  double distance = 0.0;
  double suppression = 0.0;  // ratio(x0) / ratio(nearby)
};

inline ContinuityWitness non_continuity_witness(const ReducedFraction& x0, double distance,
                                                double min_factor) {
  if (!(distance > 0.0) || !(min_factor >= 1.0)) throw domain_error("invalid witness request");
  const std::int64_t p = x0.num(), q = x0.den();
  // Neighbour c/d of p/q with |p d - q c| = 1 and d <= q.
  std::int64_t c = 0, d = 1;
  if (q == 1) {
    c = p == 0 ? 1 : p - 1;  // approach 0 from above, integers from below
  } else {
    // d = p^{-1} mod q by the extended Euclidean algorithm.
    std::int64_t r0 = q, r1 = ((p % q) + q) % q, t0 = 0, t1 = 1;
    while (r1 != 0) {
      const std::int64_t k = r0 / r1;
      std::tie(r0, r1) = std::make_pair(r1, r0 - k * r1);
      std::tie(t0, t1) = std::make_pair(t1, t0 - k * t1);
    }
    d = ((t0 % q) + q) % q;
    c = static_cast<std::int64_t>((static_cast<int128>(p) * d - 1) / q);
  }
  // (c + k p) / (d + k q) sits at distance 1 / (q (d + k q)) and has
  // denominator d + k q.
  const double need_den = std::max(1.0 / (distance * static_cast<double>(q)),
                                   static_cast<double>(q) * std::pow(min_factor, 0.25));
  std::int64_t k = static_cast<std::int64_t>(
      std::ceil((need_den - static_cast<double>(d)) / static_cast<double>(q)));
  k = std::max<std::int64_t>(k, 1);
  ContinuityWitness w;
  w.at_x0 = make_sample(x0);
  w.nearby = make_sample(reduce(ninionics::detail::checked_add(c, ninionics::detail::checked_mul(k, p)),
                                ninionics::detail::checked_add(d, ninionics::detail::checked_mul(k, q))));
  w.distance = std::abs((w.nearby.chi_turns - x0).to_double());
  const long double stretch = static_cast<long double>(w.nearby.q) / static_cast<long double>(q);
  w.suppression = static_cast<double>(stretch * stretch * stretch * stretch);
  return w;
}

// ---------------------------------------------------------------------------
// Prime-number sequences.

enum class ProbeMode { fixed_denominator, growing_denominator };

inline std::string_view to_string(ProbeMode m) {
  return m == ProbeMode::fixed_denominator ? "fixed_denominator" : "growing_denominator";
}

struct SequencePoint {
  std::int64_t m_index = 0;
  std::int64_t prime_m = 0;
  ReducedFraction chi_turns;
  double distance = 0.0;  // |chi/2pi - target|
  double energy_ratio = 0.0;
  std::optional<ReducedFraction> energy_ratio_exact;
  // For a fermionic gas, p + q even maps onto bosonic ghosts.
  bool fermion_ghost = false;
};

struct SequenceProbe {
  std::int64_t prime_n = 0;
  ProbeMode mode = ProbeMode::fixed_denominator;
  double target = 0.0;
  std::vector<SequencePoint> points;  // ordered by decreasing distance
  std::vector<std::int64_t> skipped;  // m indices with P_n | P_m (fixed mode)
  double limit_estimate = 0.0;        // ratio at the closest point
};

// Fixed mode: chi/2pi = (P_m mod P_n) / P_n, all sharing denominator P_n.
// Growing mode: chi/2pi = P_n / P_m, or with a target x0 the nearest
// fraction k / P_m to x0, so the denominator grows with m.
inline SequenceProbe prime_sequence_probe(std::int64_t n_index, std::span<const std::int64_t> m_indices,
                                          ProbeMode mode,
                                          std::optional<ReducedFraction> target = std::nullopt) {
  if (n_index < 1) throw domain_error("prime index n must be >= 1");
  if (m_indices.empty()) throw domain_error("no m indices given");
  std::int64_t max_index = n_index;
  for (std::int64_t m : m_indices) {
    if (m < 1) throw domain_error("prime index m must be >= 1");
    if (mode == ProbeMode::growing_denominator && !target && m <= n_index)
      throw domain_error("growing-denominator sequences need m > n");
    max_index = std::max(max_index, m);
  }
  const std::vector<std::int64_t> primes = first_primes(static_cast<std::size_t>(max_index));
  SequenceProbe probe;
  probe.mode = mode;
  probe.prime_n = primes[static_cast<std::size_t>(n_index - 1)];
  const std::int64_t pn = probe.prime_n;

  for (std::int64_t m : m_indices) {
    const std::int64_t pm = primes[static_cast<std::size_t>(m - 1)];
    ReducedFraction x;
    if (mode == ProbeMode::fixed_denominator) {
      if (pm % pn == 0) {
        probe.skipped.push_back(m);
        continue;
      }
      x = reduce(pm % pn, pn);
    } else if (target) {
      const std::int64_t k = static_cast<std::int64_t>(std::llround(target->to_double() * static_cast<double>(pm)));
      x = reduce(k, pm);
    } else {
      x = reduce(pn, pm);
    }
    SequencePoint pt;
    pt.m_index = m;
    pt.prime_m = pm;
    pt.chi_turns = x;
    const FractalSample s = make_sample(x);
    pt.energy_ratio = s.energy_ratio;
    pt.energy_ratio_exact = s.energy_ratio_exact;
    pt.fermion_ghost = (x.num() + x.den()) % 2 == 0;
    probe.points.push_back(pt);
  }
  if (target) probe.target = target->to_double();
  else if (mode == ProbeMode::growing_denominator) probe.target = 0.0;
  else if (!probe.points.empty()) probe.target = probe.points.front().chi_turns.to_double();

  const ReducedFraction target_exact =
      target ? *target
             : (mode == ProbeMode::growing_denominator || probe.points.empty()
                    ? ReducedFraction(0, 1)
                    : probe.points.front().chi_turns);
  for (SequencePoint& pt : probe.points) pt.distance = std::abs((pt.chi_turns - target_exact).to_double());
  std::stable_sort(probe.points.begin(), probe.points.end(),
                   [](const SequencePoint& a, const SequencePoint& b) { return a.distance > b.distance; });
  if (!probe.points.empty()) probe.limit_estimate = probe.points.back().energy_ratio;
  return probe;
}

}  // namespace ninionics::fractal

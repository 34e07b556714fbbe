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

// Finite phase-sum identities behind the statistical transmutation, and the
// regularised angular-momentum count that turns sums over m into sums over
// groups of q consecutive levels.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "ninionics/errors.hpp"
#include "ninionics/family.hpp"
#include "ninionics/numerics.hpp"
#include "ninionics/parallel.hpp"
#include "ninionics/rational.hpp"

namespace ninionics::identities {

struct IdentityOptions {
  // Smallest accepted gamma = beta * omega. The m = 0 bosonic term diverges
  // at gamma = 0.
  double gamma_floor = 1e-6;
};

// Which sign the fermionic right-hand side uses. `flipped` replaces
// (-1)^{p+q} by -(-1)^{p+q} and exists to show the sign is load-bearing.
enum class FermionSign { standard, flipped };

struct IdentityCheck {
  std::int64_t p = 0;
  std::int64_t q = 1;
  double gamma = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double imag = 0.0;  // |Im| of the complex phase sum before taking Re
};

namespace detail {

inline void validate(std::int64_t p, std::int64_t q, double gamma, const IdentityOptions& opt) {
  if (q < 1) throw domain_error("denominator q must be positive");
  if (std::gcd(p, q) != 1) throw domain_error("p/q must be irreducible");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw domain_error("gamma must be positive and finite");
  if (gamma < opt.gamma_floor) throw domain_error("gamma below the configured floor");
}

// One summand log(1 + sign * e^{-gamma} e^{2 pi i r / n}) with r/n already
// reduced into [0, 1).
inline std::complex<double> log_term(double sign, double gamma, std::int64_t r, std::int64_t n) {
  // |e^{-gamma}| < 1 keeps 1 + w in the open right half plane, away from the cut.
  if (!(std::exp(-gamma) < 1.0)) throw domain_error("phase-sum argument left the principal-branch disc");
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
  return numerics::log_one_plus(sign, gamma, numerics::Phase::of(angle));
}

}  // namespace detail

// (1/2) sum_{c=+-1} sum_{m=0}^{q-1} log(1 - e^{-gamma + 2 pi i c m p/q}),
// returned as a complex number; its imaginary part cancels in pairs.
inline std::complex<double> boson_phase_sum_complex(std::int64_t p, std::int64_t q, double gamma,
                                                    const IdentityOptions& opt = {}) {
  detail::validate(p, q, gamma, opt);
  std::complex<double> sum{};
  for (int c : {+1, -1}) {
    for (std::int64_t m = 0; m < q; ++m) {
      std::int64_t r = (static_cast<int128>(c) * m * p) % q;
      if (r < 0) r += q;
      sum += detail::log_term(-1.0, gamma, r, q);
    }
  }
  return 0.5 * sum;
}

inline double boson_phase_sum(std::int64_t p, std::int64_t q, double gamma,
                              const IdentityOptions& opt = {}) {
  return boson_phase_sum_complex(p, q, gamma, opt).real();
}

// Right-hand side log(1 - e^{-q gamma}).
inline double boson_identity_rhs(std::int64_t q, double gamma) {
  return std::log(-std::expm1(-static_cast<double>(q) * gamma));
}

inline IdentityCheck check_boson_identity(std::int64_t p, std::int64_t q, double gamma,
                                          const IdentityOptions& opt = {}) {
  const std::complex<double> s = boson_phase_sum_complex(p, q, gamma, opt);
  IdentityCheck c{p, q, gamma, s.real(), boson_identity_rhs(q, gamma), 0.0, std::abs(s.imag())};
  c.residual = std::abs(c.lhs - c.rhs);
  return c;
}

inline double boson_identity_residual(std::int64_t p, std::int64_t q, double gamma,
                                      const IdentityOptions& opt = {}) {
  return check_boson_identity(p, q, gamma, opt).residual;
}

// (1/2) sum_{c} sum_{m=0}^{q-1} log(1 + e^{-gamma + 2 pi i c (m + 1/2) p/q}).
inline std::complex<double> fermion_phase_sum_complex(std::int64_t p, std::int64_t q, double gamma,
                                                      const IdentityOptions& opt = {}) {
  detail::validate(p, q, gamma, opt);
  const std::int64_t n = 2 * q;  // phase (2m + 1) p / (2q)
  std::complex<double> sum{};
  for (int c : {+1, -1}) {
    for (std::int64_t m = 0; m < q; ++m) {
      std::int64_t r = (static_cast<int128>(c) * (2 * m + 1) * p) % n;
      if (r < 0) r += n;
      sum += detail::log_term(+1.0, gamma, r, n);
    }
  }
  return 0.5 * sum;
}

inline double fermion_phase_sum(std::int64_t p, std::int64_t q, double gamma,
                                const IdentityOptions& opt = {}) {
  return fermion_phase_sum_complex(p, q, gamma, opt).real();
}

// Right-hand side log[1 - (-1)^{p+q} e^{-q gamma}].
inline double fermion_identity_rhs(std::int64_t p, std::int64_t q, double gamma,
                                   FermionSign sign = FermionSign::standard) {
  double parity = ((p + q) % 2 == 0) ? 1.0 : -1.0;
  if (sign == FermionSign::flipped) parity = -parity;
  const double x = std::exp(-static_cast<double>(q) * gamma);
  return std::log1p(-parity * x);
}

inline IdentityCheck check_fermion_identity(std::int64_t p, std::int64_t q, double gamma,
                                            FermionSign sign = FermionSign::standard,
                                            const IdentityOptions& opt = {}) {
  const std::complex<double> s = fermion_phase_sum_complex(p, q, gamma, opt);
  IdentityCheck c{p, q, gamma, s.real(), fermion_identity_rhs(p, q, gamma, sign), 0.0,
                  std::abs(s.imag())};
  c.residual = std::abs(c.lhs - c.rhs);
  return c;
}

inline double fermion_identity_residual(std::int64_t p, std::int64_t q, double gamma,
                                        FermionSign sign = FermionSign::standard,
                                        const IdentityOptions& opt = {}) {
  return check_fermion_identity(p, q, gamma, sign, opt).residual;
}

// Every irreducible p/q with q <= q_max over one period of the phase (one
// turn for bosons, two for fermions), paired with every gamma. Reported in
// (q, p, gamma) order whatever the thread count.
inline std::vector<IdentityCheck> scan_identities(Family family, std::int64_t q_max,
                                                  std::span<const double> gammas,
                                                  FermionSign sign = FermionSign::standard,
                                                  unsigned threads = 1,
                                                  const IdentityOptions& opt = {}) {
  if (q_max < 1) throw domain_error("q_max must be >= 1");
  struct Job {
    std::int64_t p, q;
    double gamma;
  };
  std::vector<Job> jobs;
  for (std::int64_t q = 1; q <= q_max; ++q)
    for (std::int64_t p = 0; p < (family == Family::fermi ? 2 * q : q); ++p)
      if (std::gcd(p, q) == 1)
        for (double g : gammas) jobs.push_back({p, q, g});
  return ordered_map(jobs.size(), threads, [&](std::size_t i) {
    const Job& j = jobs[i];
    return family == Family::bose ? check_boson_identity(j.p, j.q, j.gamma, opt)
                                  : check_fermion_identity(j.p, j.q, j.gamma, sign, opt);
  });
}

// S(eps) = sum_{m in Z} e^{-eps |m|} = (1 + e^{-eps}) / (1 - e^{-eps}).
inline double regularized_count(double eps) {
  if (!(eps > 0.0)) throw domain_error("regulator eps must be positive");
  return (1.0 + std::exp(-eps)) / (-std::expm1(-eps));
}

// S(q eps) / S(eps); tends to 1/q as eps -> 0.
inline double regularized_count_ratio(std::int64_t q, double eps) {
  if (q < 1) throw domain_error("q must be positive");
  if (!(eps > 0.0)) throw domain_error("regulator eps must be positive");
  if (q == 1) return 1.0;
  return regularized_count(static_cast<double>(q) * eps) / regularized_count(eps);
}

// Default regulator ladder: eps = 1e-2, 1e-3, 1e-4.
struct RegulatorLadder {
  double first = 1e-2;
  double ratio = 10.0;
  int steps = 3;

  std::vector<double> values() const {
    std::vector<double> v;
    double e = first;
    for (int i = 0; i < steps; ++i, e /= ratio) v.push_back(e);
    return v;
  }
};

// eps -> 0 limit of S(q eps)/S(eps) by Richardson elimination over the ladder.
inline double extrapolated_count_ratio(std::int64_t q, const RegulatorLadder& ladder = {}) {
  std::vector<double> samples;
  for (double e : ladder.values()) samples.push_back(regularized_count_ratio(q, e));
  return numerics::richardson(samples, ladder.ratio);
}

}  // namespace ninionics::identities

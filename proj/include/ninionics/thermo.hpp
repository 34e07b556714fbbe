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

// Thermodynamics of free gases under imaginary rotation.
//
// Massless closed forms are carried as exact rational multiples of pi^2
// (PowerLaw). The quadrature path evaluates the co-rotating free energy
// directly: momentum integrals by adaptive quadrature, the angular-momentum
// sum with an e^{-eps|m|} regulator, Richardson-extrapolated to eps -> 0.
// It never uses the phase-sum identities, so it serves as their oracle.
//
// All quantities are in units of the inverse temperature beta of the heat
// bath. The sum over m is normalised so that its regularised count is one;
// at chi = 0 this reproduces the standard d^3k/(2pi)^3 phase space.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>
#include <optional>
#include <string_view>
#include <vector>

#include "ninionics/errors.hpp"
#include "ninionics/family.hpp"
#include "ninionics/identities.hpp"
#include "ninionics/numerics.hpp"
#include "ninionics/parallel.hpp"
#include "ninionics/rational.hpp"

namespace ninionics::thermo {

inline constexpr double pi2 = std::numbers::pi * std::numbers::pi;

enum class Ensemble { bose, fermi, bose_ghost, fermi_ghost };

inline std::string_view to_string(Ensemble e) {
  switch (e) {
    case Ensemble::bose: return "bose";
    case Ensemble::fermi: return "fermi";
    case Ensemble::bose_ghost: return "bose_ghost";
    case Ensemble::fermi_ghost: return "fermi_ghost";
  }
  return "?";
}

inline bool is_ghost(Ensemble e) { return e == Ensemble::bose_ghost || e == Ensemble::fermi_ghost; }

struct GasSpec {
  Family family = Family::bose;
  double mass = 0.0;        // in units of 1/beta when beta = 1
  double mu = 0.0;          // chemical potential
  double degeneracy = 1.0;  // internal states per (k, m) level, e.g. 2 spins
};

// Free-energy density f, energy density, pressure and entropy density.
// `beta` is the inverse temperature at which P = -f and s = beta (e + P)
// hold; for a rotating gas that is the effective q * beta.
struct ThermoQuantities {
  double f = 0.0;
  double energy = 0.0;
  double pressure = 0.0;
  double entropy = 0.0;
  double beta = 1.0;

  double pressure_residual() const { return std::abs(pressure + f); }
  double entropy_residual() const { return std::abs(entropy - beta * (energy + pressure)); }
};

// f = c pi^2 / (k beta)^4 for an exact rational c and integer stretch k.
struct PowerLaw {
  ReducedFraction f_coeff;
  std::int64_t beta_multiplier = 1;

  ReducedFraction k_power(int n) const {
    std::int64_t v = 1;
    for (int i = 0; i < n; ++i) v = ninionics::detail::checked_mul(v, beta_multiplier);
    return ReducedFraction(1, v);
  }

  // Coefficients of pi^2 / beta^4 (f, energy, pressure) and pi^2 / beta^3
  // (entropy) in terms of the bath beta.
  ReducedFraction free_energy_coeff() const { return f_coeff * k_power(4); }
  ReducedFraction energy_coeff() const { return ReducedFraction::integer(-3) * free_energy_coeff(); }
  ReducedFraction pressure_coeff() const { return -free_energy_coeff(); }
  ReducedFraction entropy_coeff() const { return ReducedFraction::integer(-4) * f_coeff * k_power(3); }

  ThermoQuantities evaluate(double beta) const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw domain_error("beta must be positive");
    const double b4 = beta * beta * beta * beta;
    ThermoQuantities t;
    t.f = free_energy_coeff().to_double() * pi2 / b4;
    t.energy = energy_coeff().to_double() * pi2 / b4;
    t.pressure = pressure_coeff().to_double() * pi2 / b4;
    t.entropy = entropy_coeff().to_double() * pi2 / (b4 / beta);
    t.beta = static_cast<double>(beta_multiplier) * beta;
    return t;
  }

  PowerLaw scaled(ReducedFraction weight) const { return {f_coeff * weight, beta_multiplier}; }
};

// Massless neutral scalar: f = -pi^2 / (90 beta^4).
inline PowerLaw blackbody_law() { return {ReducedFraction(-1, 90), 1}; }

// One fermionic degree of freedom: 7/8 of the scalar value.
inline PowerLaw fermion_dof_law() { return {ReducedFraction(-7, 720), 1}; }

inline ThermoQuantities blackbody_scalar(double beta) { return blackbody_law().evaluate(beta); }

// Rational rotation chi / 2pi = p/q stretches beta to q beta.
inline PowerLaw scaled_law(const PowerLaw& base, const StatAngle& chi) {
  const std::int64_t q = thomae(chi.bosonic_canonical()).den();
  return {base.f_coeff, ninionics::detail::checked_mul(base.beta_multiplier, q)};
}

// Rescales already evaluated quantities: q^-4 for f, energy and pressure,
// q^-3 for entropy.
inline ThermoQuantities scaled_quantities(const ThermoQuantities& base, const StatAngle& chi) {
  const double ft = thomae(chi.bosonic_canonical()).to_double();
  const double ft3 = ft * ft * ft;
  const double ft4 = ft3 * ft;
  return {base.f * ft4, base.energy * ft4, base.pressure * ft4, base.entropy * ft3, base.beta / ft};
}

// Non-rotating ensemble equivalent to a rotating one: free energy equals
// multiplicity times the free energy of `out_family` at effective_beta.
struct MappedEnsemble {
  double effective_beta = 1.0;
  std::int64_t beta_multiplier = 1;
  Ensemble out_family = Ensemble::bose;
  // Fermi branch: weight relative to the input species. Ghost branch: weight
  // relative to one real scalar (a Dirac fermion yields two ghosts).
  std::int64_t multiplicity = 1;
};

namespace detail {

inline void require_coprime(std::int64_t p, std::int64_t q) {
  if (q < 1) throw domain_error("denominator q must be positive");
  if (std::gcd(p, q) != 1) throw domain_error("p/q must be irreducible");
}

inline void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw domain_error("beta must be positive");
}

}  // namespace detail

inline MappedEnsemble boson_equivalence(std::int64_t p, std::int64_t q, double beta = 1.0) {
  detail::require_coprime(p, q);
  detail::require_beta(beta);
  return {static_cast<double>(q) * beta, q, Ensemble::bose, 1};
}

// p + q odd: the same fermion at q beta. p + q even: bosonic ghosts at
// q beta, two per Dirac fermion.
inline MappedEnsemble fermion_equivalence(std::int64_t p, std::int64_t q, double beta = 1.0) {
  detail::require_coprime(p, q);
  detail::require_beta(beta);
  const bool odd = ((p + q) % 2 + 2) % 2 == 1;
  if (odd) return {static_cast<double>(q) * beta, q, Ensemble::fermi, 1};
  return {static_cast<double>(q) * beta, q, Ensemble::bose_ghost, -2};
}

// Closed-form law of a mapped ensemble. `species` is the non-rotating law of
// the input fermion (used on the fermi branch); ghosts and bosons are
// measured against one real scalar.
inline PowerLaw mapped_law(const MappedEnsemble& m, const PowerLaw& species = fermion_dof_law()) {
  const PowerLaw base = (m.out_family == Ensemble::fermi || m.out_family == Ensemble::fermi_ghost)
                            ? species
                            : blackbody_law();
  PowerLaw out = base.scaled(ReducedFraction::integer(m.multiplicity));
  out.beta_multiplier = ninionics::detail::checked_mul(base.beta_multiplier, m.beta_multiplier);
  return out;
}

// Closed-form law of `dof` fermionic degrees of freedom under the map; a
// Dirac fermion is dof = 2, so each dof contributes half its ghost weight.
inline PowerLaw fermion_gas_law(const MappedEnsemble& m, std::int64_t dof) {
  if (dof < 1) throw domain_error("fermionic degrees of freedom must be >= 1");
  if (m.out_family == Ensemble::fermi) return mapped_law(m).scaled(ReducedFraction::integer(dof));
  return mapped_law(m).scaled(ReducedFraction(dof, 2));
}

// Dirac fermion at chi / 2pi = 1/3: two bosonic ghosts at 3 beta.
inline PowerLaw dirac_ghost_law() { return mapped_law(fermion_equivalence(1, 3)); }

inline ThermoQuantities dirac_ghost_thermo(double beta) { return dirac_ghost_law().evaluate(beta); }

// ---------------------------------------------------------------------------
// Quadrature oracle.

struct QuadratureConfig {
  identities::RegulatorLadder ladder{};
  // Truncate the regulated m-sum where e^{-eps m_cut} drops below this.
  double tail = 1e-12;
  // Explicit truncation; 0 derives it from `tail` and the smallest eps.
  std::int64_t m_cut = 0;
  numerics::QuadratureOptions inner{1e-13, 1e-12, 4000};
  numerics::QuadratureOptions outer{1e-13, 1e-12, 4000};
  unsigned threads = 1;
};

struct ModeIntegral {
  double value = 0.0;  // Re of the c-averaged mode free energy, units beta^-4
  double imag = 0.0;   // largest pointwise |Im| of the c-averaged integrand
  double error = 0.0;  // quadrature error estimate
};

struct FreeEnergyEstimate {
  double value = 0.0;  // extrapolated eps -> 0
  std::vector<double> eps;
  std::vector<double> samples;  // regulated value per eps
  std::vector<ModeIntegral> modes;  // one per residue class of m mod period
  std::int64_t m_cut = 0;
  double imag = 0.0;
  double error = 0.0;
};

namespace detail {

inline void validate_gas(const GasSpec& gas) {
  if (!(gas.mass >= 0.0) || !std::isfinite(gas.mass)) throw domain_error("mass must be >= 0");
  if (!(gas.degeneracy > 0.0)) throw domain_error("degeneracy must be positive");
  if (!std::isfinite(gas.mu)) throw domain_error("chemical potential must be finite");
  if (gas.family == Family::bose) {
    if (gas.mass == 0.0 && gas.mu != 0.0)
      throw domain_error("divergent integrand: massless bosons require mu = 0");
    if (gas.mass > 0.0 && !(std::abs(gas.mu) < gas.mass))
      throw domain_error("divergent integrand: bosons require |mu| < mass");
  }
}

}  // namespace detail

// Mode free energy at fixed phase theta (in turns):
//   (g / beta) (1/2) sum_c (1/2) sum_r  int d^3k/(2pi)^3  L,
//   L = log(1 - e^{-beta(w - r mu) + i c theta})    (bose)
//   L = -log(1 + e^{-beta(w - r mu) + i c theta})   (fermi)
// evaluated as int k_rho dk_rho / 2pi  int dk_z / 2pi in beta-scaled momenta.
inline ModeIntegral mode_free_energy(const GasSpec& gas, double beta, const ReducedFraction& theta,
                                     const QuadratureConfig& cfg = {}) {
  detail::require_beta(beta);
  detail::validate_gas(gas);
  const double angle = 2.0 * std::numbers::pi * theta.mod(1).to_double();
  const numerics::Phase ph_plus = numerics::Phase::of(angle);
  const numerics::Phase ph_minus = numerics::Phase::of(-angle);
  const double m2 = (beta * gas.mass) * (beta * gas.mass);
  const double bmu = beta * gas.mu;
  const double sign = gas.family == Family::bose ? -1.0 : 1.0;
  const double outer_sign = gas.family == Family::bose ? 1.0 : -1.0;
  double max_imag = 0.0;

  // Integrand in the scaled energy x = beta * omega.
  auto lagrangian = [&](double x) {
    std::complex<double> acc{};
    for (double r : {+1.0, -1.0}) {
      acc += numerics::log_one_plus(sign, x - r * bmu, ph_plus);
      acc += numerics::log_one_plus(sign, x - r * bmu, ph_minus);
    }
    acc *= 0.25 * outer_sign;
    max_imag = std::max(max_imag, std::abs(acc.imag()));
    return acc.real();
  };

  double inner_error = 0.0;
  auto over_kz = [&](double k_rho) {
    const double base = k_rho * k_rho + m2;
    auto f = [&](double kz) { return lagrangian(std::sqrt(base + kz * kz)); };
    const numerics::QuadratureResult r = numerics::integrate_half_line(f, cfg.inner);
    if (!r.converged) throw std::runtime_error("inner momentum quadrature did not converge");
    inner_error = std::max(inner_error, r.error);
    // k_z runs over the whole line; the integrand is even.
    return k_rho * 2.0 * r.value;
  };
  const numerics::QuadratureResult outer = numerics::integrate_half_line(over_kz, cfg.outer);
  if (!outer.converged) throw std::runtime_error("outer momentum quadrature did not converge");

  const double norm = gas.degeneracy / (4.0 * std::numbers::pi * std::numbers::pi);
  const double b4 = beta * beta * beta * beta;
  ModeIntegral out;
  out.value = norm * outer.value / b4;
  out.imag = norm * max_imag / b4;
  out.error = norm * (outer.error + inner_error) / b4;
  return out;
}

// m-sum truncation needed for the smallest regulator in the ladder.
inline std::int64_t required_m_cut(const QuadratureConfig& cfg) {
  const std::vector<double> eps = cfg.ladder.values();
  const double smallest = *std::min_element(eps.begin(), eps.end());
  return static_cast<std::int64_t>(std::ceil(-std::log(cfg.tail) / smallest)) + 1;
}

// Regularised average of a function h(m mod period) over m in [-M, M] with
// weight e^{-eps |m|}, normalised by the same regulated count.
inline double regulated_mode_average(std::span<const double> by_residue, double eps,
                                     std::int64_t m_cut) {
  const auto period = static_cast<std::int64_t>(by_residue.size());
  std::vector<double> weight(by_residue.size(), 0.0);
  for (std::int64_t m = -m_cut; m <= m_cut; ++m) {
    std::int64_t a = m % period;
    if (a < 0) a += period;
    weight[static_cast<std::size_t>(a)] += std::exp(-eps * static_cast<double>(m < 0 ? -m : m));
  }
  double num = 0.0, den = 0.0;
  for (std::size_t a = 0; a < weight.size(); ++a) {
    num += weight[a] * by_residue[a];
    den += weight[a];
  }
  return num / den;
}

// Free-energy density of the gas at chi / 2pi = turns, from the co-rotating
// mode sum. Phases: m chi for bosons, (m + 1/2) chi for fermions.
inline FreeEnergyEstimate free_energy_quadrature(const GasSpec& gas, double beta,
                                                 const StatAngle& chi,
                                                 const QuadratureConfig& cfg = {}) {
  detail::require_beta(beta);
  detail::validate_gas(gas);
  FreeEnergyEstimate est;
  est.eps = cfg.ladder.values();
  const std::int64_t needed = required_m_cut(cfg);
  if (cfg.m_cut != 0 && cfg.m_cut < needed)
    throw truncation_error("m_cut too small for the regulator tail bound", needed);
  est.m_cut = cfg.m_cut != 0 ? cfg.m_cut : needed;

  const ReducedFraction t = chi.turns();
  const std::int64_t period = t.den();
  const ReducedFraction half(1, 2);
  est.modes = ordered_map(static_cast<std::size_t>(period), cfg.threads, [&](std::size_t a) {
    const ReducedFraction level = ReducedFraction::integer(static_cast<std::int64_t>(a));
    const ReducedFraction theta = gas.family == Family::bose ? level * t : (level + half) * t;
    return mode_free_energy(gas, beta, theta, cfg);
  });

  std::vector<double> h;
  for (const ModeIntegral& m : est.modes) {
    h.push_back(m.value);
    est.imag = std::max(est.imag, m.imag);
    est.error = std::max(est.error, m.error);
  }
  for (double e : est.eps) est.samples.push_back(regulated_mode_average(h, e, est.m_cut));
  est.value = numerics::richardson(est.samples, cfg.ladder.ratio);
  return est;
}

// ---------------------------------------------------------------------------
// Consistency helpers.

// energy = d(beta f)/d beta by central differences with step beta * rel_step.
inline double finite_difference_energy(const std::function<double(double)>& f_of_beta, double beta,
                                       double rel_step = 1e-5) {
  const double h = beta * rel_step;
  return ((beta + h) * f_of_beta(beta + h) - (beta - h) * f_of_beta(beta - h)) / (2.0 * h);
}

// entropy = beta^2 df/dbeta.
inline double finite_difference_entropy(const std::function<double(double)>& f_of_beta, double beta,
                                        double rel_step = 1e-5) {
  const double h = beta * rel_step;
  return beta * beta * (f_of_beta(beta + h) - f_of_beta(beta - h)) / (2.0 * h);
}

// Pure beta^-4 law from a free-energy density f at beta.
inline ThermoQuantities power_law_quantities(double f, double beta) {
  return {f, -3.0 * f, -f, -4.0 * beta * f, beta};
}

// ---------------------------------------------------------------------------
// Crossed Dirichlet-Neumann walls.

// sum_{m odd >= 1} e^{-eps m} / sum_{m in Z} e^{-eps |m|}; tends to 1/4.
inline double odd_count_ratio(double eps) {
  if (!(eps > 0.0)) throw domain_error("regulator eps must be positive");
  const double odd = std::exp(-eps) / (-std::expm1(-2.0 * eps));
  return odd / identities::regularized_count(eps);
}

inline double extrapolated_odd_count_ratio(const identities::RegulatorLadder& ladder = {}) {
  std::vector<double> samples;
  for (double e : ladder.values()) samples.push_back(odd_count_ratio(e));
  return numerics::richardson(samples, ladder.ratio);
}

// Dirichlet eta(4) = sum (-1)^{k+1} / k^4 by direct summation, smallest
// terms first.
inline double alternating_zeta4(std::int64_t terms = 100000) {
  double s = 0.0;
  for (std::int64_t k = terms; k >= 1; --k) {
    const double kd = static_cast<double>(k);
    const double term = 1.0 / (kd * kd * kd * kd);
    s += (k % 2 == 1) ? term : -term;
  }
  return s;
}

struct WallsOracle {
  // (1/beta) int d^3k/(2pi)^3 log(1 + e^{-beta w}) by quadrature, units beta^-4.
  double mode_integral = 0.0;
  // The same integral from the alternating series eta(4) / pi^2.
  double series_value = 0.0;
  double mode_relative_error = 0.0;
  double odd_count = 0.0;  // extrapolated odd-m fraction
  ThermoQuantities quantities;
  double energy_relative_deviation = 0.0;   // (oracle - reported) / |reported|
  double entropy_relative_deviation = 0.0;
};

struct WallsResult {
  ThermoQuantities quantities;
  PowerLaw law;
  bool reported_value = false;  // `quantities` are reference values, not computed
  std::optional<WallsOracle> oracle;
};

// Non-rotating: a quarter of the blackbody (odd positive m only). Rotating at
// chi = pi: the reference fermionic-ghost values, plus an independent
// evaluation of the per-mode form (odd count times the fermionic-form
// logarithm at beta) and its deviation from them.
inline WallsResult crossed_walls_thermo(double beta, bool rotating, const QuadratureConfig& cfg = {}) {
  detail::require_beta(beta);
  WallsResult out;
  if (!rotating) {
    out.law = blackbody_law().scaled(ReducedFraction(1, 4));
    out.quantities = out.law.evaluate(beta);
    return out;
  }
  out.law = {ReducedFraction(1, 5760), 1};
  out.quantities = out.law.evaluate(beta);
  out.reported_value = true;

  WallsOracle o;
  const ModeIntegral mode = mode_free_energy(GasSpec{}, beta, ReducedFraction(1, 2), cfg);
  // Bosonic log at phase pi is log(1 + e^{-beta w}).
  o.mode_integral = mode.value;
  const double b4 = beta * beta * beta * beta;
  o.series_value = alternating_zeta4() / pi2 / b4;
  o.mode_relative_error = std::abs(o.mode_integral - o.series_value) / std::abs(o.series_value);
  o.odd_count = extrapolated_odd_count_ratio(cfg.ladder);
  o.quantities = power_law_quantities(o.odd_count * o.mode_integral, beta);
  o.energy_relative_deviation =
      (o.quantities.energy - out.quantities.energy) / std::abs(out.quantities.energy);
  o.entropy_relative_deviation =
      (o.quantities.entropy - out.quantities.entropy) / std::abs(out.quantities.entropy);
  out.oracle = o;
  return out;
}

}  // namespace ninionics::thermo

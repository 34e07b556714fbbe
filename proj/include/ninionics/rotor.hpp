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

// Planar quantum rotor as a finite model of the angular-momentum generating
// function: rotwisted partition function, Fourier inversion to per-m weights,
// the generating function K and the shift-operator eigenphase.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ninionics/errors.hpp"
#include "ninionics/numerics.hpp"

namespace ninionics::rotor {

// Levels m in [-m_cut, m_cut] with E_m = m^2 / (2 I).
struct RotorSpec {
  double inertia = 1.0;
  std::int64_t m_cut = 50;

  double energy(std::int64_t m) const {
    const double md = static_cast<double>(m);
    return md * md / (2.0 * inertia);
  }
};

// Integer phases e^{i chi m}, or the fermionic e^{i chi (m + 1/2)}.
enum class PhaseOffset { integer, half_integer };

inline double offset_value(PhaseOffset o) { return o == PhaseOffset::integer ? 0.0 : 0.5; }

struct RotorOptions {
  double tail_bound = 1e-14;  // required e^{-beta E_M}
};

// Smallest m_cut with e^{-beta E_M} < tail_bound.
inline std::int64_t required_m_cut(double inertia, double beta, double tail_bound = 1e-14) {
  const double m = std::sqrt(2.0 * inertia * -std::log(tail_bound) / beta);
  return static_cast<std::int64_t>(std::floor(m)) + 1;
}

inline void check_spec(const RotorSpec& spec, double beta, const RotorOptions& opt = {}) {
  if (!(spec.inertia > 0.0) || !std::isfinite(spec.inertia)) throw domain_error("inertia must be positive");
  if (spec.m_cut < 1) throw domain_error("m_cut must be >= 1");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw domain_error("beta must be positive");
  if (!(std::exp(-beta * spec.energy(spec.m_cut)) < opt.tail_bound)) {
    const std::int64_t need = required_m_cut(spec.inertia, beta, opt.tail_bound);
    throw truncation_error("rotor truncation too small: need m_cut >= " + std::to_string(need), need);
  }
}

// Z(beta, chi) = sum_{|m| <= M} e^{i chi (m + offset)} e^{-beta E_m}, summed
// from the tails inward with mirror levels paired.
inline std::complex<double> partition_rotwisted(const RotorSpec& spec, double beta, double chi,
                                                PhaseOffset offset = PhaseOffset::integer,
                                                const RotorOptions& opt = {}) {
  check_spec(spec, beta, opt);
  const double off = offset_value(offset);
  std::complex<double> z{};
  for (std::int64_t m = spec.m_cut; m >= 1; --m) {
    const double w = std::exp(-beta * spec.energy(m));
    const double md = static_cast<double>(m);
    z += w * (numerics::unit_phase(chi, md + off) + numerics::unit_phase(chi, -md + off));
  }
  z += numerics::unit_phase(chi, off);
  return z;
}

inline double partition_plain(const RotorSpec& spec, double beta, const RotorOptions& opt = {}) {
  return partition_rotwisted(spec, beta, 0.0, PhaseOffset::integer, opt).real();
}

// R(m) for m in [m_min, m_min + weights.size()).
struct AngularDistribution {
  std::int64_t m_min = 0;
  std::vector<double> weights;
  double max_imag = 0.0;  // largest discarded imaginary part
  std::size_t grid_points = 0;

  double at(std::int64_t m) const { return weights.at(static_cast<std::size_t>(m - m_min)); }
  double total() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

// R(m) = (1/2pi) int_{-pi}^{pi} dchi e^{-i chi (m + offset)} Z(chi) / Z(0) on
// an equispaced grid. The integrand is a trigonometric polynomial of degree
// 2M, so the rule is exact once the grid has more than 2M points.
inline AngularDistribution angular_distribution(const RotorSpec& spec, double beta,
                                                std::size_t grid_points = 0,
                                                PhaseOffset offset = PhaseOffset::integer,
                                                const RotorOptions& opt = {}) {
  check_spec(spec, beta, opt);
  const std::size_t levels = static_cast<std::size_t>(2 * spec.m_cut + 1);
  const std::size_t n = grid_points == 0 ? 2 * levels - 1 : grid_points;  // default 4M + 1
  if (n < levels)
    throw aliasing_error("chi grid of " + std::to_string(n) + " points aliases a band limit of " +
                         std::to_string(spec.m_cut) + "; need at least " + std::to_string(levels));
  const double z0 = partition_plain(spec, beta, opt);
  const double off = offset_value(offset);

  std::vector<double> chis(n);
  std::vector<std::complex<double>> ratio(n);
  for (std::size_t j = 0; j < n; ++j) {
    chis[j] = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    ratio[j] = partition_rotwisted(spec, beta, chis[j], offset, opt) / z0;
  }
  AngularDistribution dist;
  dist.m_min = -spec.m_cut;
  dist.grid_points = n;
  dist.weights.resize(levels);
  for (std::size_t i = 0; i < levels; ++i) {
    const double m = static_cast<double>(dist.m_min + static_cast<std::int64_t>(i)) + off;
    std::complex<double> acc{};
    for (std::size_t j = 0; j < n; ++j) acc += numerics::unit_phase(-chis[j], m) * ratio[j];
    acc /= static_cast<double>(n);
    dist.weights[i] = acc.real();
    dist.max_imag = std::max(dist.max_imag, std::abs(acc.imag()));
  }
  return dist;
}

// K = -log[Z(beta, chi) / Z(beta, 0)], principal branch.
inline std::complex<double> generating_function(const RotorSpec& spec, double beta, double chi,
                                                PhaseOffset offset = PhaseOffset::integer,
                                                const RotorOptions& opt = {}) {
  const std::complex<double> z = partition_rotwisted(spec, beta, chi, offset, opt);
  const double z0 = partition_plain(spec, beta, opt);
  const std::complex<double> r = z / z0;
  // Below this the truncated sum cannot tell Z from zero.
  const double resolution =
      10.0 * std::max(opt.tail_bound,
                      static_cast<double>(2 * spec.m_cut + 1) * std::numeric_limits<double>::epsilon());
  if (std::abs(r) <= resolution)
    throw zero_crossing_error("partition function vanishes at chi = " + std::to_string(chi), chi);
  const std::complex<double> k = -std::log(r);
  return {k.real() + 0.0, k.imag() + 0.0};  // no negative zeros
}

struct EnsembleReport {
  std::complex<double> z_chi;
  double z_0 = 0.0;
  std::complex<double> k;
  AngularDistribution r;
};

inline EnsembleReport ensemble_report(const RotorSpec& spec, double beta, double chi,
                                      PhaseOffset offset = PhaseOffset::integer,
                                      const RotorOptions& opt = {}) {
  EnsembleReport rep;
  rep.z_chi = partition_rotwisted(spec, beta, chi, offset, opt);
  rep.z_0 = partition_plain(spec, beta, opt);
  rep.k = generating_function(spec, beta, chi, offset, opt);
  rep.r = angular_distribution(spec, beta, 0, offset, opt);
  return rep;
}

// Result of applying the angular-momentum shift (T c)_m = c_{m-1} to the
// truncated coherent vector c_m = e^{i chi m}.
struct ShiftReport {
  double residual = 0.0;  // max over |m| <= W of |(T c)_m - phase * c_m|
  std::complex<double> eigenphase;
  // Component convention: the shift lowers the phase index, so the
  // components pick up e^{-i chi}. Acting on kets |chi> the same operator
  // carries the conjugate phase e^{+i chi}.
  std::string convention = "component: (T c)_m = c_{m-1} = e^{-i chi} c_m";
};

inline ShiftReport shift_eigenphase_check(double chi, std::int64_t window, std::int64_t m_cut) {
  if (window < 0 || m_cut < 1) throw domain_error("window and m_cut must be positive");
  if (window >= m_cut) throw domain_error("window must be smaller than m_cut");
  const std::size_t size = static_cast<std::size_t>(2 * m_cut + 1);
  std::vector<std::complex<double>> c(size), shifted(size);
  for (std::int64_t m = -m_cut; m <= m_cut; ++m)
    c[static_cast<std::size_t>(m + m_cut)] = numerics::unit_phase(chi, static_cast<double>(m));
  shifted[0] = 0.0;  // amplitude shifted in from outside the truncation
  for (std::size_t i = 1; i < size; ++i) shifted[i] = c[i - 1];

  ShiftReport rep;
  rep.eigenphase = numerics::unit_phase(-chi, 1.0);
  for (std::int64_t m = -window; m <= window; ++m) {
    const std::size_t i = static_cast<std::size_t>(m + m_cut);
    rep.residual = std::max(rep.residual, std::abs(shifted[i] - rep.eigenphase * c[i]));
  }
  return rep;
}

}  // namespace ninionics::rotor

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

// Ninionic occupation numbers and level-dependent statistics.
//
//   n(xi) = (e^{e} cos xi -+ 1) / (1 -+ 2 e^{e} cos xi + e^{2e}),  e = beta (omega - mu)
//
// upper signs for bosons, lower for fermions, with xi = m chi (bosons) or
// (m + 1/2) chi (fermions) for the level with angular momentum m.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

#include "ninionics/errors.hpp"
#include "ninionics/family.hpp"
#include "ninionics/rational.hpp"

namespace ninionics::occupation {

struct NinionParams {
  Family family = Family::bose;
  double xi = 0.0;  // radians, any real
  double beta = 1.0;
  double omega = 0.0;
  double mu = 0.0;
};

// Statistical parameter of one level: raw value, its representative in
// (-pi, pi], and the exact representative in turns (-1/2, 1/2].
struct XiValue {
  double raw = 0.0;
  double canonical = 0.0;
  ReducedFraction canonical_turns;
};

// Reduces an angle into (-pi, pi].
inline double canonical_angle(double xi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(xi, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

inline XiValue xi_of(std::int64_t m, const StatAngle& chi, Family family) {
  const ReducedFraction level = family == Family::bose
                                    ? ReducedFraction::integer(m)
                                    : ReducedFraction::integer(m) + ReducedFraction(1, 2);
  const ReducedFraction turns = level * chi.turns();
  const ReducedFraction centered = centered_turns(turns);
  return {2.0 * std::numbers::pi * turns.to_double(), 2.0 * std::numbers::pi * centered.to_double(),
          centered};
}

// Evaluates the occupation number. The form is chosen by the sign of
// e = beta (omega - mu) so that no exponential overflows, and the
// near-cancelling differences are built from expm1 and half-angle terms.
inline double occupation(const NinionParams& p) {
  if (!std::isfinite(p.xi) || !std::isfinite(p.beta) || !std::isfinite(p.omega) || !std::isfinite(p.mu))
    throw domain_error("occupation: non-finite parameter");
  if (!(p.beta > 0.0)) throw domain_error("occupation: beta must be positive");
  const double e = p.beta * (p.omega - p.mu);
  const double xi = canonical_angle(p.xi);
  const bool bose = p.family == Family::bose;
  if (bose && xi == 0.0 && e <= 0.0) {
    if (e == 0.0) throw pole_error("occupation: Bose-Einstein pole at omega = mu");
    throw domain_error("occupation: bosons at xi = 0 require beta (omega - mu) > 0");
  }
  const double sh = std::sin(0.5 * xi);
  const double ch = std::cos(0.5 * xi);
  const double sh2 = sh * sh;
  const double ch2 = ch * ch;
  const double sin_xi2 = 4.0 * sh2 * ch2;

  double num, den;
  if (e >= 0.0) {
    const double y = std::exp(-e);
    const double one_minus_y = -std::expm1(-e);
    if (bose) {
      const double a = one_minus_y + 2.0 * y * sh2;  // 1 - y cos xi
      num = y * (one_minus_y - 2.0 * sh2);            // y (cos xi - y)
      den = a * a + y * y * sin_xi2;
    } else {
      const double a = one_minus_y + 2.0 * y * ch2;  // 1 + y cos xi
      num = y * (2.0 * ch2 - one_minus_y);            // y (cos xi + y)
      den = a * a + y * y * sin_xi2;
    }
  } else {
    const double x = std::exp(e);
    const double x_minus_one = std::expm1(e);
    if (bose) {
      const double b = x_minus_one + 2.0 * sh2;  // x - cos xi
      num = -(-x_minus_one + 2.0 * x * sh2);     // x cos xi - 1
      den = b * b + sin_xi2;
    } else {
      const double b = x_minus_one + 2.0 * ch2;  // x + cos xi
      num = -x_minus_one + 2.0 * x * ch2;        // x cos xi + 1
      den = b * b + sin_xi2;
    }
  }
  if (den == 0.0) throw pole_error("occupation: denominator vanishes");
  if (std::abs(den) < 1e-15) throw singularity_error("occupation: denominator below 1e-15");
  return num / den;
}

enum class Label { boson, fermion, boson_ghost, fermion_ghost, ninion };

inline std::string_view to_string(Label l) {
  switch (l) {
    case Label::boson: return "boson";
    case Label::fermion: return "fermion";
    case Label::boson_ghost: return "boson_ghost";
    case Label::fermion_ghost: return "fermion_ghost";
    case Label::ninion: return "ninion";
  }
  return "?";
}

// Which classical distribution a level follows, and at what stretched
// inverse temperature k * beta.
struct LevelClass {
  Label label = Label::ninion;
  std::int64_t beta_multiplier = 1;

  friend bool operator==(const LevelClass&, const LevelClass&) = default;
};

namespace detail {

enum class CosValue { plus_one, zero, minus_one, other };

inline LevelClass classify(Family family, CosValue c) {
  const bool bose = family == Family::bose;
  switch (c) {
    case CosValue::plus_one: return {bose ? Label::boson : Label::fermion, 1};
    case CosValue::zero: return {bose ? Label::fermion_ghost : Label::fermion, 2};
    case CosValue::minus_one: return {bose ? Label::fermion_ghost : Label::boson_ghost, 1};
    case CosValue::other: break;
  }
  return {Label::ninion, 1};
}

}  // namespace detail

// Exact classification from the canonical turns xi / 2pi in (-1/2, 1/2].
inline LevelClass limit_form(Family family, const ReducedFraction& canonical_turns) {
  using detail::CosValue;
  const ReducedFraction t = centered_turns(canonical_turns);
  CosValue c = CosValue::other;
  if (t == ReducedFraction(0, 1)) c = CosValue::plus_one;
  else if (t == ReducedFraction(1, 4) || t == ReducedFraction(-1, 4)) c = CosValue::zero;
  else if (t == ReducedFraction(1, 2)) c = CosValue::minus_one;
  return detail::classify(family, c);
}

// Classification of a real angle; cos xi in {1, 0, -1} is recognised within
// `tol` radians.
inline LevelClass limit_form(Family family, double xi, double tol = 1e-12) {
  using detail::CosValue;
  const double a = std::abs(canonical_angle(xi));
  CosValue c = CosValue::other;
  if (a <= tol) c = CosValue::plus_one;
  else if (std::abs(a - 0.5 * std::numbers::pi) <= tol) c = CosValue::zero;
  else if (a >= std::numbers::pi - tol) c = CosValue::minus_one;
  return detail::classify(family, c);
}

// Closed-form distribution of a classical level class at e = beta (omega - mu).
inline double reference_occupation(const LevelClass& lc, double e) {
  const double ke = static_cast<double>(lc.beta_multiplier) * e;
  switch (lc.label) {
    case Label::boson: return 1.0 / std::expm1(ke);
    case Label::fermion: return 1.0 / (std::exp(ke) + 1.0);
    case Label::boson_ghost: return -1.0 / std::expm1(ke);
    case Label::fermion_ghost: return -1.0 / (std::exp(ke) + 1.0);
    case Label::ninion: break;
  }
  throw domain_error("ninion levels have no classical reference distribution");
}

struct LevelEntry {
  std::int64_t m = 0;
  XiValue xi;
  LevelClass cls;
};

// Level-by-level statistics for m in [m_lo, m_hi], derived from the
// occupation formula through xi_of and the exact limit_form.
inline std::vector<LevelEntry> classify_levels(const StatAngle& chi, Family family, std::int64_t m_lo,
                                               std::int64_t m_hi) {
  if (m_hi < m_lo) throw domain_error("classify_levels: empty m range");
  std::vector<LevelEntry> out;
  out.reserve(static_cast<std::size_t>(m_hi - m_lo + 1));
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    const XiValue xi = xi_of(m, chi, family);
    out.push_back({m, xi, limit_form(family, xi.canonical_turns)});
  }
  return out;
}

}  // namespace ninionics::occupation

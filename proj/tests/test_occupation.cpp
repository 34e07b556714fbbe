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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ninionics/occupation.hpp"

namespace {

namespace oc = ninionics::occupation;
using ninionics::Family;
using ninionics::ReducedFraction;
using ninionics::StatAngle;
using oc::Label;
using oc::LevelClass;

constexpr double kPi = std::numbers::pi;

double n_at(Family f, double xi, double e) { return oc::occupation({f, xi, 1.0, e, 0.0}); }

std::vector<double> eps_grid() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(0.01, 20.0);
  std::vector<double> v(200);
  for (double& x : v) x = d(rng);
  return v;
}

TEST(Occupation, Examples) {
  EXPECT_NEAR(n_at(Family::bose, 0.0, std::log(2.0)), 1.0, 1e-15);
  EXPECT_NEAR(n_at(Family::bose, kPi, 0.0), -0.5, 1e-15);
  EXPECT_NEAR(n_at(Family::bose, kPi / 4, 1e-4), -0.5, 1e-3);
  // beta, omega and mu enter only through beta (omega - mu).
  EXPECT_NEAR(oc::occupation({Family::fermi, 0.3, 2.0, 1.5, 0.25}), n_at(Family::fermi, 0.3, 2.5), 1e-15);
}

TEST(Occupation, NativeReductions) {
  for (double e : eps_grid()) {
    EXPECT_NEAR(n_at(Family::bose, 0.0, e), 1.0 / std::expm1(e), 1e-12 * std::max(1.0, 1.0 / std::expm1(e)));
    EXPECT_NEAR(n_at(Family::fermi, 0.0, e), 1.0 / (std::exp(e) + 1.0), 1e-12);
  }
}

TEST(Occupation, QuarterTurnReductions) {
  for (double e : eps_grid()) {
    EXPECT_NEAR(n_at(Family::bose, kPi / 2, e), -1.0 / (std::exp(2 * e) + 1.0), 1e-12);
    EXPECT_NEAR(n_at(Family::fermi, kPi / 2, e), 1.0 / (std::exp(2 * e) + 1.0), 1e-12);
  }
}

TEST(Occupation, HalfTurnReductions) {
  for (double e : eps_grid()) {
    EXPECT_NEAR(n_at(Family::bose, kPi, e), -1.0 / (std::exp(e) + 1.0), 1e-12);
    EXPECT_NEAR(n_at(Family::fermi, kPi, e), -1.0 / std::expm1(e), 1e-12 * std::max(1.0, 1.0 / std::expm1(e)));
  }
}

TEST(Occupation, ReductionsMatchLimitForms) {
  for (Family f : {Family::bose, Family::fermi})
    for (double xi : {0.0, kPi / 2, kPi, -kPi / 2})
      for (double e : {0.05, 0.9, 7.0}) {
        const LevelClass lc = oc::limit_form(f, xi);
        ASSERT_NE(lc.label, Label::ninion);
        EXPECT_NEAR(n_at(f, xi, e), oc::reference_occupation(lc, e), 1e-12);
      }
}

TEST(Occupation, HighTemperatureLimit) {
  for (double xi : {kPi / 4, kPi / 2, 3 * kPi / 4, kPi, -2.0, 0.15, 5.0})
    EXPECT_NEAR(n_at(Family::bose, xi, 1e-6), -0.5, 1e-4) << xi;
}

TEST(Occupation, PeriodicityAndParity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xd(-kPi, kPi), ed(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double xi = xd(rng), e = ed(rng);
    if (std::abs(xi) < 1e-3) continue;
    for (Family f : {Family::bose, Family::fermi}) {
      const double n = n_at(f, xi, e);
      EXPECT_NEAR(n_at(f, -xi, e), n, 1e-12 * std::max(1.0, std::abs(n)));
      EXPECT_NEAR(n_at(f, xi + 2 * kPi, e), n, 1e-9 * std::max(1.0, std::abs(n)));
    }
  }
}

TEST(Occupation, LargeEnergyDecay) {
  for (Family f : {Family::bose, Family::fermi})
    for (double xi = -kPi; xi <= kPi; xi += 0.1)
      for (double e = 5.0; e <= 40.0; e += 1.5) EXPECT_LE(std::abs(n_at(f, xi, e)), 2.0 * std::exp(-e));
}

TEST(Occupation, MatchesDirectFormulaAwayFromCancellation) {
  for (Family f : {Family::bose, Family::fermi})
    for (double xi : {0.4, 1.3, 2.2, 3.0})
      for (double e : {-3.0, -0.5, 0.5, 3.0}) {
        const double x = std::exp(e), s = f == Family::bose ? -1.0 : 1.0;
        const double direct = (x * std::cos(xi) + s) / (1.0 + 2.0 * s * x * std::cos(xi) + x * x);
        EXPECT_NEAR(n_at(f, xi, e), direct, 1e-13);
      }
}

TEST(Occupation, Errors) {
  EXPECT_THROW((void)n_at(Family::bose, 0.0, 0.0), ninionics::pole_error);
  EXPECT_THROW((void)n_at(Family::bose, 2 * kPi, 0.0), ninionics::pole_error);
  EXPECT_THROW((void)n_at(Family::bose, 0.0, -1.0), ninionics::domain_error);
  // cos(pi) is -1 only to rounding, so this pole surfaces as a numerical singularity.
  EXPECT_THROW((void)n_at(Family::fermi, kPi, 0.0), ninionics::singularity_error);
  EXPECT_THROW((void)n_at(Family::bose, 1e-9, 1e-9), ninionics::singularity_error);
  EXPECT_THROW((void)oc::occupation({Family::bose, 1.0, 0.0, 1.0, 0.0}), ninionics::domain_error);
  EXPECT_THROW((void)n_at(Family::bose, NAN, 1.0), ninionics::domain_error);
}

TEST(XiOf, Values) {
  EXPECT_EQ(oc::xi_of(0, StatAngle(2, 7), Family::bose).raw, 0.0);
  const auto f = oc::xi_of(0, StatAngle(1, 2), Family::fermi);
  EXPECT_DOUBLE_EQ(f.raw, kPi / 2);
  EXPECT_EQ(f.canonical_turns, ReducedFraction(1, 4));
  const auto b = oc::xi_of(3, StatAngle(1, 2), Family::bose);
  EXPECT_DOUBLE_EQ(b.raw, 3 * kPi);
  EXPECT_DOUBLE_EQ(b.canonical, kPi);
  EXPECT_EQ(b.canonical_turns, ReducedFraction(1, 2));
  EXPECT_DOUBLE_EQ(oc::canonical_angle(-kPi), kPi);
  EXPECT_DOUBLE_EQ(oc::canonical_angle(5 * kPi / 2), kPi / 2);
}

TEST(LimitForm, Examples) {
  EXPECT_EQ(oc::limit_form(Family::bose, kPi / 2), (LevelClass{Label::fermion_ghost, 2}));
  EXPECT_NEAR(oc::reference_occupation(oc::limit_form(Family::bose, kPi / 2), 0.7), -1.0 / (std::exp(1.4) + 1.0), 1e-15);
  EXPECT_EQ(oc::limit_form(Family::fermi, kPi), (LevelClass{Label::boson_ghost, 1}));
  EXPECT_NEAR(oc::reference_occupation(oc::limit_form(Family::fermi, kPi), 0.7), -1.0 / std::expm1(0.7), 1e-15);
  EXPECT_EQ(oc::limit_form(Family::bose, kPi / 3).label, Label::ninion);
  EXPECT_THROW((void)oc::reference_occupation({Label::ninion, 1}, 1.0), ninionics::domain_error);
  EXPECT_EQ(oc::limit_form(Family::fermi, ReducedFraction(-1, 4)), (LevelClass{Label::fermion, 2}));
  EXPECT_EQ(oc::limit_form(Family::bose, ReducedFraction(0, 1)), (LevelClass{Label::boson, 1}));
}

TEST(ClassifyLevels, QuarterTurnCycle) {
  const auto levels = oc::classify_levels(StatAngle(1, 4), Family::bose, 0, 4);
  const std::vector<LevelClass> expected = {{Label::boson, 1},
                                            {Label::fermion_ghost, 2},
                                            {Label::fermion_ghost, 1},
                                            {Label::fermion_ghost, 2},
                                            {Label::boson, 1}};
  ASSERT_EQ(levels.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(levels[i].cls, expected[i]) << i;
}

TEST(ClassifyLevels, HalfTurn) {
  for (const auto& l : oc::classify_levels(StatAngle(1, 2), Family::bose, -10, 10)) {
    if (l.m % 2 == 0) EXPECT_EQ(l.cls, (LevelClass{Label::boson, 1})) << l.m;
    else EXPECT_EQ(l.cls, (LevelClass{Label::fermion_ghost, 1})) << l.m;
  }
}

TEST(ClassifyLevels, NoRotationIsNative) {
  for (Family f : {Family::bose, Family::fermi})
    for (const auto& l : oc::classify_levels(StatAngle(0, 1), f, -5, 5))
      EXPECT_EQ(l.cls, (LevelClass{f == Family::bose ? Label::boson : Label::fermion, 1}));
}

TEST(ClassifyLevels, AgreesWithFormula) {
  // Every non-ninion class reproduces the occupation number of its level.
  for (Family f : {Family::bose, Family::fermi})
    for (std::int64_t q = 1; q <= 8; ++q)
      for (const auto& l : oc::classify_levels(StatAngle(1, q), f, -8, 8)) {
        if (l.cls.label == Label::ninion) continue;
        EXPECT_NEAR(n_at(f, l.xi.raw, 0.8), oc::reference_occupation(l.cls, 0.8), 1e-12);
      }
  EXPECT_THROW((void)oc::classify_levels(StatAngle(0, 1), Family::bose, 3, 2), ninionics::domain_error);
}

}  // namespace

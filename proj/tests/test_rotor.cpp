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
#include <complex>
#include <numbers>
#include <random>

#include "ninionics/rotor.hpp"

namespace {

namespace ro = ninionics::rotor;

constexpr double kPi = std::numbers::pi;
// sum_{m=-20}^{20} (-1)^m e^{-m^2}, frozen from a 30-digit summation.
constexpr double kAlternatingTheta = 0.300625800868984372989211687105;

ro::RotorSpec spec_for(double beta_over_2i, std::int64_t m_cut) {
  return {1.0 / (2.0 * beta_over_2i), m_cut};
}

TEST(Partition, Values) {
  const auto s = spec_for(1.0, 20);
  const auto z0 = ro::partition_rotwisted(s, 1.0, 0.0);
  EXPECT_EQ(z0.imag(), 0.0);
  EXPECT_GT(z0.real(), 0.0);
  EXPECT_NEAR(ro::partition_rotwisted(s, 1.0, kPi).real(), kAlternatingTheta, 1e-15);
}

TEST(Partition, ReflectionSymmetry) {
  const auto s = spec_for(0.1, 50);
  for (double chi = -4.0; chi <= 4.0; chi += 0.01) {
    const auto z = ro::partition_rotwisted(s, 1.0, chi);
    EXPECT_LT(std::abs(z.imag()), 1e-14);
    EXPECT_LE(std::abs(z), ro::partition_plain(s, 1.0) * (1.0 + 1e-15));
  }
}

TEST(Partition, TruncationCheck) {
  const ro::RotorSpec s = spec_for(0.01, 20);
  try {
    (void)ro::partition_rotwisted(s, 1.0, 0.3);
    FAIL() << "expected truncation_error";
  } catch (const ninionics::truncation_error& e) {
    EXPECT_EQ(e.required(), ro::required_m_cut(s.inertia, 1.0));
    EXPECT_LT(std::exp(-s.energy(e.required())), 1e-14);
    EXPECT_GE(std::exp(-s.energy(e.required() - 1)), 1e-14);
    EXPECT_NO_THROW((void)ro::partition_rotwisted({s.inertia, e.required()}, 1.0, 0.3));
  }
}

TEST(Partition, MonotoneTruncation) {
  const auto s = spec_for(0.5, 9);
  const auto a = ro::partition_rotwisted(s, 1.0, 0.7);
  const auto b = ro::partition_rotwisted({s.inertia, 30}, 1.0, 0.7);
  EXPECT_LT(std::abs(a - b), 1e-14);
}

TEST(Distribution, MatchesBoltzmannWeights) {
  for (double b2i : {0.1, 1.0, 10.0}) {
    const auto s = spec_for(b2i, 50);
    const auto r = ro::angular_distribution(s, 1.0);
    const double z0 = ro::partition_plain(s, 1.0);
    EXPECT_EQ(r.grid_points, 201u);
    for (std::int64_t m = -50; m <= 50; ++m) {
      EXPECT_NEAR(r.at(m), std::exp(-s.energy(m)) / z0, 1e-12) << m;
      EXPECT_GE(r.at(m), -1e-14);  // nonnegative up to rounding
    }
    EXPECT_NEAR(r.total(), 1.0, 1e-12);
    EXPECT_LT(r.max_imag, 1e-12);
  }
}

TEST(Distribution, GroundStateDominatesAtLowTemperature) {
  const auto r = ro::angular_distribution(spec_for(40.0, 5), 1.0);
  EXPECT_NEAR(r.at(0), 1.0, 1e-12);
}

TEST(Distribution, AliasingIsRejected) {
  const auto s = spec_for(1.0, 50);
  EXPECT_THROW((void)ro::angular_distribution(s, 1.0, 100), ninionics::aliasing_error);
  EXPECT_NO_THROW((void)ro::angular_distribution(s, 1.0, 101));
}

TEST(Distribution, FourierRoundTrip) {
  const auto s = spec_for(0.1, 50);
  const auto r = ro::angular_distribution(s, 1.0);
  const double z0 = ro::partition_plain(s, 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-kPi, kPi);
  for (int i = 0; i < 64; ++i) {
    const double chi = d(rng);
    std::complex<double> synth{};
    for (std::int64_t m = -50; m <= 50; ++m) synth += std::polar(1.0, chi * m) * r.at(m);
    EXPECT_LT(std::abs(synth - ro::partition_rotwisted(s, 1.0, chi) / z0), 1e-12);
    EXPECT_LT(std::abs(std::exp(-ro::generating_function(s, 1.0, chi)) - synth), 1e-12);
  }
}

TEST(Distribution, HalfIntegerOffset) {
  const auto s = spec_for(1.0, 30);
  const auto r = ro::angular_distribution(s, 1.0, 0, ro::PhaseOffset::half_integer);
  const double z0 = ro::partition_plain(s, 1.0);
  for (std::int64_t m = -30; m <= 30; ++m) EXPECT_NEAR(r.at(m), std::exp(-s.energy(m)) / z0, 1e-12);
  // Z_f(chi) = e^{i chi / 2} Z(chi).
  const auto zf = ro::partition_rotwisted(s, 1.0, 0.9, ro::PhaseOffset::half_integer);
  EXPECT_LT(std::abs(zf - std::polar(1.0, 0.45) * ro::partition_rotwisted(s, 1.0, 0.9)), 1e-14);
}

TEST(GeneratingFunction, Properties) {
  const auto s = spec_for(1.0, 30);
  EXPECT_EQ(ro::generating_function(s, 1.0, 0.0), std::complex<double>(0.0, 0.0));
  for (double chi : {0.3, 1.2, 2.9}) {
    const auto k = ro::generating_function(s, 1.0, chi);
    EXPECT_EQ(k.imag(), 0.0);
    EXPECT_GT(k.real(), 0.0);
    EXPECT_EQ(ro::generating_function(s, 1.0, -chi), k);
  }
}

TEST(GeneratingFunction, ZeroCrossing) {
  const auto s = spec_for(0.001, 200);
  try {
    (void)ro::generating_function(s, 1.0, kPi);
    FAIL() << "expected zero_crossing_error";
  } catch (const ninionics::zero_crossing_error& e) {
    EXPECT_EQ(e.chi(), kPi);
  }
}

TEST(Shift, Eigenphase) {
  EXPECT_EQ(ro::shift_eigenphase_check(0.0, 10, 20).residual, 0.0);
  const auto r = ro::shift_eigenphase_check(kPi / 3, 98, 100);
  EXPECT_LT(r.residual, 1e-14);
  const auto h = ro::shift_eigenphase_check(kPi, 5, 10);
  EXPECT_EQ(h.eigenphase.real(), -1.0);
  EXPECT_LT(std::abs(h.eigenphase.imag()), 1e-15);
  EXPECT_FALSE(h.convention.empty());
  EXPECT_THROW((void)ro::shift_eigenphase_check(0.5, 10, 10), ninionics::domain_error);
}

}  // namespace

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
#include <numeric>
#include <vector>

#include "ninionics/identities.hpp"

namespace {

namespace id = ninionics::identities;
using ninionics::Family;

// Frozen from a 30-digit direct summation.
constexpr double kLog1pExpM2 = 0.126928011042972496;     // log(1 + e^-2)
constexpr double kLog1mExpM35 = -0.0306627162554596337;  // log(1 - e^-3.5)

// Naive complex-log summation, angles in long double.
double direct_sum(double sign, std::int64_t p, std::int64_t q, double gamma, bool half) {
  std::complex<long double> s = 0;
  for (int c : {1, -1})
    for (std::int64_t m = 0; m < q; ++m) {
      const long double phi = 2.0L * std::numbers::pi_v<long double> * c * (m + (half ? 0.5L : 0.0L)) * p / q;
      s += std::log(1.0L + static_cast<long double>(sign) * std::exp(-static_cast<long double>(gamma)) *
                               std::polar(1.0L, phi));
    }
  return static_cast<double>(0.5L * s.real());
}

TEST(BosonPhaseSum, Examples) {
  EXPECT_DOUBLE_EQ(id::boson_phase_sum(1, 1, 1.0), std::log(1.0 - std::exp(-1.0)));
  EXPECT_NEAR(id::boson_phase_sum(1, 2, 1.0), std::log(1.0 - std::exp(-2.0)), 1e-15);
  EXPECT_NEAR(id::boson_phase_sum(3, 7, 0.5), kLog1mExpM35, 1e-12);
  EXPECT_EQ(id::boson_identity_residual(1, 1, 1.0), 0.0);
  EXPECT_LT(id::boson_identity_residual(1, 2, 1.0), 1e-12);
  EXPECT_LT(id::boson_identity_residual(5, 8, 2.0), 1e-12);
}

TEST(BosonPhaseSum, AgreesWithDirectSummation) {
  for (std::int64_t q = 1; q <= 20; ++q)
    for (std::int64_t p = 0; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      for (double g : {0.3, 1.0, 4.0})
        EXPECT_NEAR(id::boson_phase_sum(p, q, g), direct_sum(-1.0, p, q, g, false), 1e-13);
    }
}

TEST(BosonPhaseSum, RejectsBadInput) {
  EXPECT_THROW((void)id::boson_phase_sum(1, 2, 0.0), ninionics::domain_error);
  EXPECT_THROW((void)id::boson_phase_sum(1, 2, -1.0), ninionics::domain_error);
  EXPECT_THROW((void)id::boson_phase_sum(1, 2, 1e-7), ninionics::domain_error);
  EXPECT_THROW((void)id::boson_phase_sum(2, 4, 1.0), ninionics::domain_error);
  EXPECT_THROW((void)id::boson_phase_sum(1, 0, 1.0), ninionics::domain_error);
  EXPECT_NO_THROW((void)id::boson_phase_sum(1, 2, 1e-7, id::IdentityOptions{1e-8}));
}

TEST(BosonPhaseSum, NumeratorIndependence) {
  for (std::int64_t q : {5, 12, 31, 64}) {
    const double ref = id::boson_phase_sum(1, q, 0.8);
    for (std::int64_t p = 2; p < q; ++p)
      if (std::gcd(p, q) == 1) {
        EXPECT_NEAR(id::boson_phase_sum(p, q, 0.8), ref, 1e-12);
      }
  }
}

TEST(FermionPhaseSum, Examples) {
  const auto c11 = id::check_fermion_identity(1, 1, 1.0);
  EXPECT_NEAR(c11.lhs, std::log(1.0 - std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(c11.rhs, std::log(1.0 - std::exp(-1.0)), 1e-15);
  const auto c12 = id::check_fermion_identity(1, 2, 1.0);
  EXPECT_LT(c12.residual, 1e-12);
  EXPECT_NEAR(c12.rhs, kLog1pExpM2, 1e-15);
  EXPECT_LT(id::fermion_identity_residual(2, 3, 0.7), 1e-12);
}

TEST(FermionPhaseSum, AgreesWithDirectSummation) {
  for (std::int64_t q = 1; q <= 20; ++q)
    for (std::int64_t p = 0; p < 2 * q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      for (double g : {0.3, 1.0, 4.0})
        EXPECT_NEAR(id::fermion_phase_sum(p, q, g), direct_sum(1.0, p, q, g, true), 1e-13);
    }
}

TEST(FermionPhaseSum, FlippedSignIsDetected) {
  // The flipped residual is |log((1 + x) / (1 - x))| with x = e^{-q gamma}.
  for (std::int64_t q = 1; q <= 20; ++q)
    for (std::int64_t p = 0; p < 2 * q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      for (double g : {0.05, 0.1, 0.5, 1.0, 2.0}) {
        const double x = std::exp(-static_cast<double>(q) * g);
        const double r = id::fermion_identity_residual(p, q, g, id::FermionSign::flipped);
        EXPECT_NEAR(r, std::abs(std::log((1.0 + x) / (1.0 - x))), 1e-12);
        if (static_cast<double>(q) * g <= 2.0) {
          EXPECT_GT(r, 0.1);
        }
      }
    }
}

TEST(Scan, FullGridBothFamilies) {
  const std::vector<double> gammas = {0.1, 1.0, 10.0};
  for (Family f : {Family::bose, Family::fermi}) {
    const auto rows = id::scan_identities(f, 64, gammas, id::FermionSign::standard, 1);
    double worst = 0.0, worst_imag = 0.0;
    for (const auto& r : rows) {
      worst = std::max(worst, r.residual);
      worst_imag = std::max(worst_imag, r.imag);
    }
    EXPECT_LT(worst, 1e-12) << ninionics::to_string(f);
    EXPECT_LT(worst_imag, 1e-13) << ninionics::to_string(f);
  }
}

TEST(Scan, OrderIndependentOfThreads) {
  const std::vector<double> gammas = {0.5, 3.0};
  const auto a = id::scan_identities(Family::fermi, 30, gammas, id::FermionSign::standard, 1);
  const auto b = id::scan_identities(Family::fermi, 30, gammas, id::FermionSign::standard, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].p, b[i].p);
    EXPECT_EQ(a[i].q, b[i].q);
    EXPECT_EQ(a[i].lhs, b[i].lhs);
  }
}

TEST(RegularizedCount, Ratios) {
  EXPECT_EQ(id::regularized_count_ratio(1, 0.37), 1.0);
  for (std::int64_t q : {2, 3, 5, 7})
    EXPECT_NEAR(id::extrapolated_count_ratio(q), 1.0 / static_cast<double>(q), 1e-6) << q;
  // S(q e) / S(e) = tanh(e/2) / tanh(q e / 2).
  for (double e : {0.01, 0.3, 2.0})
    EXPECT_NEAR(id::regularized_count_ratio(3, e), std::tanh(e / 2) / std::tanh(1.5 * e), 1e-14);
  EXPECT_THROW((void)id::regularized_count_ratio(2, 0.0), ninionics::domain_error);
  EXPECT_THROW((void)id::regularized_count(-1.0), ninionics::domain_error);
}

}  // namespace

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

// Numerical building blocks shared by the thermodynamics kernels.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "ninionics/errors.hpp"

namespace ninionics::numerics {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::size_t intervals = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  std::size_t max_intervals = 2000;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kronrod_weights[7];
  double gauss = fc * gauss_weights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kronrod_nodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kronrod_weights[j] * pair;
    if (j % 2 == 1) gauss += gauss_weights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

// Globally adaptive G7-K15 quadrature on a finite interval: the segment with
// the largest error estimate is bisected until the summed estimate meets
// max(abs_tol, rel_tol * |value|).
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  std::vector<detail::Segment> heap;
  heap.reserve(64);
  heap.push_back(detail::gauss_kronrod_15(f, a, b));
  double value = heap.front().value;
  double error = heap.front().error;
  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(value)); };
  while (error > target() && heap.size() < opt.max_intervals) {
    std::pop_heap(heap.begin(), heap.end());
    const detail::Segment worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    const detail::Segment left = detail::gauss_kronrod_15(f, worst.a, mid);
    const detail::Segment right = detail::gauss_kronrod_15(f, mid, worst.b);
    heap.back() = left;
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  // Final sum in ascending magnitude to strip accumulated drift.
  std::sort(heap.begin(), heap.end(), [](const detail::Segment& x, const detail::Segment& y) {
    return std::abs(x.value) < std::abs(y.value);
  });
  value = 0.0;
  error = 0.0;
  for (const auto& s : heap) {
    value += s.value;
    error += s.error;
  }
  QuadratureResult r;
  r.value = value;
  r.error = error;
  r.intervals = heap.size();
  r.converged = error <= target();
  return r;
}

// Integral over [0, inf) through the substitution k = t / (1 - t).
// The integrand must decay fast enough that f(k) k^2 -> 0.
template <class F>
QuadratureResult integrate_half_line(F&& f, const QuadratureOptions& opt = {}) {
  auto mapped = [&f](double t) {
    if (t >= 1.0) return 0.0;
    const double s = 1.0 - t;
    const double k = t / s;
    const double v = f(k);
    return v == 0.0 ? 0.0 : v / (s * s);
  };
  return integrate(mapped, 0.0, 1.0, opt);
}

// Richardson extrapolation of samples A(h_0), A(h_0/r), A(h_0/r^2), ...
// assuming A(h) = A(0) + c_1 h + c_2 h^2 + ...; n samples remove n-1 terms.
inline double richardson(std::span<const double> samples, double ratio) {
  if (samples.empty()) throw domain_error("richardson: no samples");
  if (!(ratio > 1.0)) throw domain_error("richardson: step ratio must exceed 1");
  std::vector<double> t(samples.begin(), samples.end());
  double factor = 1.0;
  for (std::size_t level = 1; level < t.size(); ++level) {
    factor *= ratio;
    for (std::size_t i = t.size() - 1; i >= level; --i) {
      t[i] = (factor * t[i] - t[i - 1]) / (factor - 1.0);
      if (i == level) break;
    }
  }
  return t.back();
}

// log(1 + w) accurate for small |w|: Re = log|1+w| through log1p.
inline std::complex<double> log1p(std::complex<double> w) {
  const double re = 0.5 * std::log1p(2.0 * w.real() + std::norm(w));
  const double im = std::atan2(w.imag(), 1.0 + w.real());
  return {re, im};
}

// Trigonometric data of a fixed phase angle, precomputed for hot loops.
struct Phase {
  double cos = 1.0;
  double sin = 0.0;
  double sin2_half = 0.0;  // sin^2(angle / 2) = (1 - cos) / 2
  double cos2_half = 1.0;  // cos^2(angle / 2) = (1 + cos) / 2

  static Phase of(double angle) {
    const double s = std::sin(0.5 * angle);
    const double c = std::cos(0.5 * angle);
    return {std::cos(angle), std::sin(angle), s * s, c * c};
  }
};

// log(1 + sign e^{-y} e^{i angle}) with sign = +-1, accurate when e^{-y} is
// close to one: 1 - e^{-y} cos and 1 + e^{-y} cos are assembled from expm1
// and half-angle terms instead of by subtraction.
inline std::complex<double> log_one_plus(double sign, double y, const Phase& ph) {
  const double d = std::exp(-y);
  if (d < 0.5) return log1p(std::complex<double>(sign * d * ph.cos, sign * d * ph.sin));
  const double near = sign < 0.0 ? 2.0 * d * ph.sin2_half : 2.0 * d * ph.cos2_half;
  const double re_part = -std::expm1(-y) + near;  // 1 + sign d cos(angle)
  const double im_part = sign * d * ph.sin;
  return {0.5 * std::log(re_part * re_part + im_part * im_part), std::atan2(im_part, re_part)};
}

// e^{i chi m} with the product chi*m carried to double-double accuracy, so
// the phase error stays at a few ulp even for large |m|.
inline std::complex<double> unit_phase(double chi, double m) {
  const double hi = chi * m;
  const double lo = std::fma(chi, m, -hi);
  const std::complex<double> base = std::polar(1.0, hi);
  return base * std::complex<double>(1.0 - 0.5 * lo * lo, lo);
}

}  // namespace ninionics::numerics

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

#pragma once

#include <stdexcept>
#include <string>

namespace ninionics {

// Invalid argument or an input outside the mathematical domain of an
// operation (zero denominator, gamma <= 0, non-coprime fraction, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The evaluated expression has a pole at the requested point.
class pole_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// A denominator is nonzero but too small to evaluate reliably.
class singularity_error : public std::range_error {
 public:
  using std::range_error::range_error;
};

// A finite truncation of an infinite sum is not accurate enough.
class truncation_error : public std::runtime_error {
 public:
  truncation_error(const std::string& what, long long required)
      : std::runtime_error(what), required_(required) {}

  // Smallest truncation that would satisfy the tail bound.
  long long required() const noexcept { return required_; }

 private:
  long long required_;
};

// A sampled Fourier grid cannot resolve the band limit of the signal.
class aliasing_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// A partition function vanished where its logarithm was requested.
class zero_crossing_error : public std::runtime_error {
 public:
  zero_crossing_error(const std::string& what, double chi)
      : std::runtime_error(what), chi_(chi) {}

  double chi() const noexcept { return chi_; }

 private:
  double chi_;
};

}  // namespace ninionics

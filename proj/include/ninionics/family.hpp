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
#include <string_view>

#include "ninionics/errors.hpp"

namespace ninionics {

// Quantum statistics of the underlying particle.
enum class Family { bose, fermi };

inline std::string_view to_string(Family f) { return f == Family::bose ? "bose" : "fermi"; }

inline Family parse_family(std::string_view s) {
  if (s == "bose" || s == "boson") return Family::bose;
  if (s == "fermi" || s == "fermion") return Family::fermi;
  throw domain_error("unknown family '" + std::string(s) + "' (expected bose or fermi)");
}

}  // namespace ninionics

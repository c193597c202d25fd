// Copyright 2026 The donorgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace donorgate::verify {

struct IdentityResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  int cases = 0;

  bool passed() const { return max_error < tolerance; }
};

struct IdentityOptions {
  std::uint64_t seed = 42;
  int trials = 10000;
  // Negative control: the dense oracles use Z_theta = diag(e^{i theta}, 1).
  bool corrupt_convention = false;
};

// Algebraic identities for diagonal gates and refocused cycles, each checked
// against dense matrix products built from Kronecker products of 2x2 factors.
std::vector<IdentityResult> verify_gate_identities(const IdentityOptions& options = {});

struct UniversalityOptions {
  std::uint64_t seed = 42;
  int random_states = 20;
  bool corrupt_convention = false;  // oracles expect CZ with phase -1 on |01>
};

// Ancilla-mediated CZ circuits and indirect measurement, simulated branch by
// branch and compared with directly computed target states.
std::vector<IdentityResult> verify_universality(const UniversalityOptions& options = {});

bool all_passed(const std::vector<IdentityResult>& results);

}  // namespace donorgate::verify

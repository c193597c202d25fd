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

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace donorgate::gates {

// State vector over n qubits, qubit 0 = most significant bit.
class PureState {
 public:
  using Amplitude = std::complex<double>;

  // Throws ValidationError unless the squared norm is 1 within 1e-12.
  PureState(int num_qubits, std::vector<Amplitude> amplitudes);

  static PureState basis(int num_qubits, std::size_t index);
  // Tensor product with `lhs` on the leading (more significant) qubits.
  static PureState product(const PureState& lhs, const PureState& rhs);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  Amplitude amplitude(std::size_t index) const { return amplitudes_.at(index); }

  // Probability of reading `outcome` on `qubit` in the computational basis.
  double probability(int qubit, int outcome) const;

 private:
  int num_qubits_ = 0;
  std::vector<Amplitude> amplitudes_;
};

struct Op {
  enum class Kind { H, X, Z, CZ, Measure, Reset };

  Kind kind;
  int qubit = 0;
  int other = -1;      // second qubit for CZ
  double theta = 0.0;  // Z rotation angle

  static Op h(int q) { return {Kind::H, q}; }
  static Op x(int q) { return {Kind::X, q}; }
  static Op z(int q, double theta) { return {Kind::Z, q, -1, theta}; }
  static Op cz(int q1, int q2) { return {Kind::CZ, q1, q2}; }
  static Op measure(int q) { return {Kind::Measure, q}; }
  // Measure, then flip the qubit when the outcome was 1.
  static Op reset(int q) { return {Kind::Reset, q}; }
};

// One measurement history. `state` is empty when the branch has zero
// probability.
struct Branch {
  std::vector<int> outcomes;
  double probability = 1.0;
  std::optional<PureState> state;
};

// Exact evolution; each measurement splits every branch in two, keeping both
// outcomes with their Born probabilities.
std::vector<Branch> simulate_circuit(const PureState& initial, std::span<const Op> ops);

// Largest amplitude difference after aligning the global phase of b to a.
double state_distance(const PureState& a, const PureState& b);

}  // namespace donorgate::gates

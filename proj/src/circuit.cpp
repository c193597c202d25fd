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

#include "donorgate/circuit.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "donorgate/errors.hpp"
#include "donorgate/gate_algebra.hpp"

namespace donorgate::gates {

namespace {

using Amps = std::vector<PureState::Amplitude>;

constexpr double kNegligibleProbability = 1e-24;

double squared_norm(const Amps& amps) {
  double sum = 0.0;
  for (const auto& a : amps) sum += std::norm(a);
  return sum;
}

void apply_h(Amps& amps, std::uint32_t bit) {
  const double s = std::numbers::sqrt2 / 2.0;
  for (std::size_t x = 0; x < amps.size(); ++x) {
    if (x & bit) continue;
    const auto lo = amps[x];
    const auto hi = amps[x | bit];
    amps[x] = s * (lo + hi);
    amps[x | bit] = s * (lo - hi);
  }
}

void apply_x(Amps& amps, std::uint32_t bit) {
  for (std::size_t x = 0; x < amps.size(); ++x) {
    if (!(x & bit)) std::swap(amps[x], amps[x | bit]);
  }
}

void apply_phase(Amps& amps, std::uint32_t mask, double theta) {
  const auto phase = std::polar(1.0, theta);
  for (std::size_t x = 0; x < amps.size(); ++x) {
    if ((x & mask) == mask) amps[x] *= phase;
  }
}

// Projects onto `outcome` and returns the probability of that outcome.
double project(Amps& amps, std::uint32_t bit, int outcome) {
  double p = 0.0;
  for (std::size_t x = 0; x < amps.size(); ++x) {
    const bool set = (x & bit) != 0;
    if (set != (outcome == 1)) {
      amps[x] = 0.0;
    } else {
      p += std::norm(amps[x]);
    }
  }
  return p;
}

struct RawBranch {
  std::vector<int> outcomes;
  double probability;
  Amps amps;  // normalized unless probability == 0
};

}  // namespace

PureState::PureState(int num_qubits, std::vector<Amplitude> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  if (num_qubits < 1 || num_qubits > 16) throw ValidationError("state needs 1..16 qubits");
  if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
    throw ValidationError("state on " + std::to_string(num_qubits) + " qubits needs " +
                          std::to_string(1u << num_qubits) + " amplitudes");
  }
  const double norm = squared_norm(amplitudes_);
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-12) {
    throw ValidationError("state is not normalized (squared norm " + std::to_string(norm) + ")");
  }
}

PureState PureState::basis(int num_qubits, std::size_t index) {
  if (num_qubits < 1 || num_qubits > 16 || index >= (std::size_t{1} << num_qubits)) {
    throw ValidationError("basis index out of range");
  }
  std::vector<Amplitude> amps(std::size_t{1} << num_qubits, 0.0);
  amps[index] = 1.0;
  return PureState(num_qubits, std::move(amps));
}

PureState PureState::product(const PureState& lhs, const PureState& rhs) {
  std::vector<Amplitude> amps(lhs.dimension() * rhs.dimension());
  for (std::size_t i = 0; i < lhs.dimension(); ++i) {
    for (std::size_t j = 0; j < rhs.dimension(); ++j) {
      amps[i * rhs.dimension() + j] = lhs.amplitude(i) * rhs.amplitude(j);
    }
  }
  return PureState(lhs.num_qubits() + rhs.num_qubits(), std::move(amps));
}

double PureState::probability(int qubit, int outcome) const {
  const std::uint32_t bit = qubit_bit(num_qubits_, qubit);
  double p = 0.0;
  for (std::size_t x = 0; x < amplitudes_.size(); ++x) {
    if (((x & bit) != 0) == (outcome == 1)) p += std::norm(amplitudes_[x]);
  }
  return p;
}

std::vector<Branch> simulate_circuit(const PureState& initial, std::span<const Op> ops) {
  const int n = initial.num_qubits();
  std::vector<RawBranch> branches{{{}, 1.0, Amps(initial.amplitudes().begin(), initial.amplitudes().end())}};

  for (const Op& op : ops) {
    const std::uint32_t bit = qubit_bit(n, op.qubit);
    switch (op.kind) {
      case Op::Kind::H:
        for (auto& b : branches) apply_h(b.amps, bit);
        break;
      case Op::Kind::X:
        for (auto& b : branches) apply_x(b.amps, bit);
        break;
      case Op::Kind::Z:
        if (!std::isfinite(op.theta)) throw ValidationError("Z rotation angle must be finite");
        for (auto& b : branches) apply_phase(b.amps, bit, op.theta);
        break;
      case Op::Kind::CZ: {
        const std::uint32_t other = qubit_bit(n, op.other);
        if (other == bit) throw ValidationError("CZ needs two distinct qubits");
        for (auto& b : branches) apply_phase(b.amps, bit | other, std::numbers::pi);
        break;
      }
      case Op::Kind::Measure:
      case Op::Kind::Reset: {
        std::vector<RawBranch> next;
        next.reserve(2 * branches.size());
        for (auto& b : branches) {
          for (int outcome : {0, 1}) {
            RawBranch child{b.outcomes, 0.0, b.amps};
            child.outcomes.push_back(outcome);
            const double p = project(child.amps, bit, outcome);
            child.probability = b.probability * p;
            if (p > kNegligibleProbability) {
              const double scale = 1.0 / std::sqrt(p);
              for (auto& a : child.amps) a *= scale;
            } else {
              // rounding residue only; there is no state to renormalize
              for (auto& a : child.amps) a = 0.0;
            }
            if (op.kind == Op::Kind::Reset && outcome == 1) apply_x(child.amps, bit);
            next.push_back(std::move(child));
          }
        }
        branches = std::move(next);
        break;
      }
    }
  }

  std::vector<Branch> out;
  out.reserve(branches.size());
  for (auto& b : branches) {
    Branch branch{std::move(b.outcomes), b.probability, std::nullopt};
    if (squared_norm(b.amps) > 0.5) branch.state = PureState(n, std::move(b.amps));
    out.push_back(std::move(branch));
  }
  return out;
}

double state_distance(const PureState& a, const PureState& b) {
  if (a.num_qubits() != b.num_qubits()) throw ValidationError("states differ in qubit count");
  PureState::Amplitude overlap = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) overlap += std::conj(b.amplitude(i)) * a.amplitude(i);
  const auto align = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : PureState::Amplitude{1.0};
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    worst = std::max(worst, std::abs(a.amplitude(i) - align * b.amplitude(i)));
  }
  return worst;
}

}  // namespace donorgate::gates

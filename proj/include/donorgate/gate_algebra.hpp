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
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace donorgate::gates {

// Phase conventions used throughout:
//   Z_theta     = diag(1, e^{i theta}) on one qubit,
//   CZ_phi      = diag(1, 1, 1, e^{i phi}) on a qubit pair,
//   qubit 0     = most significant bit (top rail of a circuit drawing),
//   basis order = lexicographic, |q0 q1 ... q_{n-1}>.
//
// A two-qubit gate in the determinant-one form diag(e^{i alpha}, e^{i beta},
// e^{i gamma}, e^{-i(alpha+beta+gamma)}) corresponds to Z_a (x) Z_b . CZ_c with
//   a = gamma - alpha,  b = beta - alpha,  c = -2 (beta + gamma),
// up to the global phase e^{i alpha}.

// Wraps an angle into (-pi, pi].
double wrap_phase(double theta);

class DiagonalGate {
 public:
  DiagonalGate(int num_qubits, std::vector<double> phases);

  static DiagonalGate identity(int num_qubits);
  static DiagonalGate z(int num_qubits, int qubit, double theta);
  static DiagonalGate cz(int num_qubits, int control, int target, double phi);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return phases_.size(); }
  std::span<const double> phases() const { return phases_; }
  double phase(std::size_t basis_index) const { return phases_.at(basis_index); }

  bool is_canonical() const;
  Eigen::MatrixXcd matrix() const;

 private:
  int num_qubits_;
  std::vector<double> phases_;
};

// Removes the global phase (phases[0] -> 0) and wraps into (-pi, pi].
DiagonalGate canonicalize(const DiagonalGate& g);

// Product of two diagonal gates; order is irrelevant since they commute.
DiagonalGate compose(const DiagonalGate& g1, const DiagonalGate& g2);

// Largest entrywise phase distance between two gates modulo global phase.
double phase_distance(const DiagonalGate& g1, const DiagonalGate& g2);

struct ZzcAngles {
  double a = 0.0;  // Z on qubit 0
  double b = 0.0;  // Z on qubit 1
  double c = 0.0;  // conditional phase on |11>
};

// Unique decomposition g = Z_a (x) Z_b . CZ_c of a canonical two-qubit gate.
ZzcAngles extract_zzc(const DiagonalGate& g);
DiagonalGate build_zzc(double a, double b, double c);
DiagonalGate build_zzc(const ZzcAngles& angles);

// X_q g X_q, canonicalized.
DiagonalGate x_conjugate(const DiagonalGate& g, int qubit);

// One adiabatic cycle: transit phases (a, b, c) plus the phases (d, e, f)
// accumulated while dwelling at the operating point for tau ns. The cycle
// operator is Z_{a+d} (x) Z_{b+e} . CZ_{c+f}.
struct CycleParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;
  double f = 0.0;
  double tau = 0.0;

  void validate() const;
  DiagonalGate gate() const;
  DiagonalGate transit_gate() const { return build_zzc(a, b, c); }
  DiagonalGate dwell_gate() const { return build_zzc(d, e, f); }
};

// Net effect of two consecutive cycles, e.g. the three stages of one cycle.
CycleParams combine_cycles(const CycleParams& first, const CycleParams& second);

// U = X^{x_mask} . diag, the closed form of every sequence of diagonal gates
// and X refocusing pulses. Bit q of x_mask (counted from qubit 0 = MSB, i.e.
// mask bit 1 << (n-1-q)) flags a trailing X on qubit q.
struct FlippedDiagonal {
  DiagonalGate diag;
  std::uint32_t x_mask = 0;

  static FlippedDiagonal identity(int num_qubits);
  int num_qubits() const { return diag.num_qubits(); }

  // Applies `next` after this operation.
  FlippedDiagonal then(const FlippedDiagonal& next) const;
  FlippedDiagonal then(const DiagonalGate& next) const;
  FlippedDiagonal then_x(int qubit) const;

  Eigen::MatrixXcd matrix() const;
};

std::uint32_t qubit_bit(int num_qubits, int qubit);

// cycle1 -> X on the ancilla (qubit 0) -> cycle2. With cycle1.f = pi and
// cycle2 free of dwell phases the result is X_0 . (Z_d (x) Z_g . CZ_pi) with
// g = 2b + c + e and no dependence on the ancilla transit phase a.
FlippedDiagonal double_cycle_net(const CycleParams& cycle1, const CycleParams& cycle2);

// The two cycles of an ancilla-refocused double-cycle.
struct DoubleCycleParams {
  CycleParams with_dwell;
  CycleParams without_dwell;
};

// Three-qubit composite on rails (ancilla1, ancilla2, data): double-cycle on
// (ancilla1, data), X on data, double-cycle on (ancilla2, data).
struct CompositeIdeal {
  FlippedDiagonal net;           // exact closed form of the whole sequence
  DiagonalGate entangling;       // two- and three-body part of net.diag
  DiagonalGate single_qubit;     // Z corrections, net.diag = entangling . single_qubit
};

CompositeIdeal composite_ideal(const DoubleCycleParams& dc1, const DoubleCycleParams& dc2);

// Splits a diagonal gate into single-qubit Z factors (theta_q = phase of the
// basis state with only qubit q set, relative to |0...0>) and the remainder,
// whose phases vanish on every basis state of Hamming weight <= 1. The split
// is exact modulo 2 pi; g = entangling_part(g) . single_qubit_part(g).
DiagonalGate single_qubit_part(const DiagonalGate& g);
DiagonalGate entangling_part(const DiagonalGate& g);

// Embeds a diagonal gate on `qubits` (listed in the order of g's rails) into
// an n-qubit register.
DiagonalGate embed(const DiagonalGate& g, int num_qubits, std::span<const int> qubits);

}  // namespace donorgate::gates

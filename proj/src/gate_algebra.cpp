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

#include "donorgate/gate_algebra.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "donorgate/errors.hpp"

namespace donorgate::gates {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxQubits = 16;

void check_qubit(int num_qubits, int qubit) {
  if (qubit < 0 || qubit >= num_qubits) {
    throw ValidationError("qubit index " + std::to_string(qubit) + " out of range for " +
                          std::to_string(num_qubits) + " qubits");
  }
}

void check_same_size(const DiagonalGate& g1, const DiagonalGate& g2) {
  if (g1.num_qubits() != g2.num_qubits()) {
    throw ValidationError("diagonal gates act on " + std::to_string(g1.num_qubits()) + " and " +
                          std::to_string(g2.num_qubits()) + " qubits");
  }
}

// X^m D X^m: the phase on |x> moves to |x ^ m>.
std::vector<double> permute_phases(std::span<const double> phases, std::uint32_t mask) {
  std::vector<double> out(phases.size());
  for (std::size_t x = 0; x < phases.size(); ++x) out[x] = phases[x ^ mask];
  return out;
}

}  // namespace

double wrap_phase(double theta) {
  double r = std::remainder(theta, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

std::uint32_t qubit_bit(int num_qubits, int qubit) {
  check_qubit(num_qubits, qubit);
  return std::uint32_t{1} << (num_qubits - 1 - qubit);
}

DiagonalGate::DiagonalGate(int num_qubits, std::vector<double> phases)
    : num_qubits_(num_qubits), phases_(std::move(phases)) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw ValidationError("diagonal gate needs 1.." + std::to_string(kMaxQubits) + " qubits");
  }
  if (phases_.size() != (std::size_t{1} << num_qubits)) {
    throw ValidationError("diagonal gate on " + std::to_string(num_qubits) + " qubits needs " +
                          std::to_string(1u << num_qubits) + " phases, got " +
                          std::to_string(phases_.size()));
  }
  for (double p : phases_) {
    if (!std::isfinite(p)) throw ValidationError("diagonal gate phase is not finite");
  }
}

DiagonalGate DiagonalGate::identity(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw ValidationError("diagonal gate needs 1.." + std::to_string(kMaxQubits) + " qubits");
  }
  return DiagonalGate(num_qubits, std::vector<double>(std::size_t{1} << num_qubits, 0.0));
}

DiagonalGate DiagonalGate::z(int num_qubits, int qubit, double theta) {
  const std::uint32_t bit = qubit_bit(num_qubits, qubit);
  std::vector<double> phases(std::size_t{1} << num_qubits, 0.0);
  for (std::size_t x = 0; x < phases.size(); ++x) {
    if (x & bit) phases[x] = theta;
  }
  return canonicalize(DiagonalGate(num_qubits, std::move(phases)));
}

DiagonalGate DiagonalGate::cz(int num_qubits, int control, int target, double phi) {
  const std::uint32_t both = qubit_bit(num_qubits, control) | qubit_bit(num_qubits, target);
  if (control == target) throw ValidationError("controlled phase needs two distinct qubits");
  std::vector<double> phases(std::size_t{1} << num_qubits, 0.0);
  for (std::size_t x = 0; x < phases.size(); ++x) {
    if ((x & both) == both) phases[x] = phi;
  }
  return canonicalize(DiagonalGate(num_qubits, std::move(phases)));
}

bool DiagonalGate::is_canonical() const {
  if (phases_[0] != 0.0) return false;
  for (double p : phases_) {
    if (p <= -kPi || p > kPi) return false;
  }
  return true;
}

Eigen::MatrixXcd DiagonalGate::matrix() const {
  const auto n = static_cast<Eigen::Index>(phases_.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = std::polar(1.0, phases_[i]);
  return m;
}

DiagonalGate canonicalize(const DiagonalGate& g) {
  std::vector<double> out(g.dimension());
  const double ref = g.phase(0);
  for (std::size_t x = 1; x < out.size(); ++x) out[x] = wrap_phase(g.phase(x) - ref);
  return DiagonalGate(g.num_qubits(), std::move(out));
}

DiagonalGate compose(const DiagonalGate& g1, const DiagonalGate& g2) {
  check_same_size(g1, g2);
  std::vector<double> sum(g1.dimension());
  for (std::size_t x = 0; x < sum.size(); ++x) sum[x] = g1.phase(x) + g2.phase(x);
  return canonicalize(DiagonalGate(g1.num_qubits(), std::move(sum)));
}

double phase_distance(const DiagonalGate& g1, const DiagonalGate& g2) {
  check_same_size(g1, g2);
  double worst = 0.0;
  for (std::size_t x = 1; x < g1.dimension(); ++x) {
    const double diff = (g1.phase(x) - g1.phase(0)) - (g2.phase(x) - g2.phase(0));
    worst = std::max(worst, std::abs(wrap_phase(diff)));
  }
  return worst;
}

ZzcAngles extract_zzc(const DiagonalGate& g) {
  if (g.num_qubits() != 2) throw ValidationError("extract_zzc needs a two-qubit gate");
  const DiagonalGate c = canonicalize(g);
  return {c.phase(2), c.phase(1), wrap_phase(c.phase(3) - c.phase(1) - c.phase(2))};
}

DiagonalGate build_zzc(double a, double b, double c) {
  return canonicalize(DiagonalGate(2, {0.0, b, a, a + b + c}));
}

DiagonalGate build_zzc(const ZzcAngles& angles) { return build_zzc(angles.a, angles.b, angles.c); }

DiagonalGate x_conjugate(const DiagonalGate& g, int qubit) {
  const std::uint32_t bit = qubit_bit(g.num_qubits(), qubit);
  return canonicalize(DiagonalGate(g.num_qubits(), permute_phases(g.phases(), bit)));
}

void CycleParams::validate() const {
  for (double v : {a, b, c, d, e, f, tau}) {
    if (!std::isfinite(v)) throw ValidationError("cycle parameters must be finite");
  }
  if (tau < 0.0) throw ValidationError("cycle dwell time must be non-negative");
}

DiagonalGate CycleParams::gate() const { return build_zzc(a + d, b + e, c + f); }

CycleParams combine_cycles(const CycleParams& first, const CycleParams& second) {
  return {first.a + second.a, first.b + second.b, first.c + second.c, first.d + second.d,
          first.e + second.e, first.f + second.f, first.tau + second.tau};
}

FlippedDiagonal FlippedDiagonal::identity(int num_qubits) {
  return {DiagonalGate::identity(num_qubits), 0};
}

FlippedDiagonal FlippedDiagonal::then(const FlippedDiagonal& next) const {
  check_same_size(diag, next.diag);
  // X^m2 D2 X^m1 D1 = X^(m1^m2) (X^m1 D2 X^m1) D1
  const DiagonalGate moved(num_qubits(), permute_phases(next.diag.phases(), x_mask));
  return {compose(moved, diag), x_mask ^ next.x_mask};
}

FlippedDiagonal FlippedDiagonal::then(const DiagonalGate& next) const {
  return then(FlippedDiagonal{next, 0});
}

FlippedDiagonal FlippedDiagonal::then_x(int qubit) const {
  return {diag, x_mask ^ qubit_bit(num_qubits(), qubit)};
}

Eigen::MatrixXcd FlippedDiagonal::matrix() const {
  const auto n = static_cast<Eigen::Index>(diag.dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    m(x ^ static_cast<Eigen::Index>(x_mask), x) = std::polar(1.0, diag.phase(x));
  }
  return m;
}

FlippedDiagonal double_cycle_net(const CycleParams& cycle1, const CycleParams& cycle2) {
  cycle1.validate();
  cycle2.validate();
  return FlippedDiagonal::identity(2).then(cycle1.gate()).then_x(0).then(cycle2.gate());
}

CompositeIdeal composite_ideal(const DoubleCycleParams& dc1, const DoubleCycleParams& dc2) {
  constexpr int kQubits = 3;
  constexpr int kData = 2;
  const int first_pair[] = {0, kData};
  const int second_pair[] = {1, kData};

  FlippedDiagonal net = FlippedDiagonal::identity(kQubits)
                            .then(embed(dc1.with_dwell.gate(), kQubits, first_pair))
                            .then_x(0)
                            .then(embed(dc1.without_dwell.gate(), kQubits, first_pair))
                            .then_x(kData)
                            .then(embed(dc2.with_dwell.gate(), kQubits, second_pair))
                            .then_x(1)
                            .then(embed(dc2.without_dwell.gate(), kQubits, second_pair));
  DiagonalGate entangling = entangling_part(net.diag);
  DiagonalGate single = single_qubit_part(net.diag);
  return {std::move(net), std::move(entangling), std::move(single)};
}

DiagonalGate single_qubit_part(const DiagonalGate& g) {
  const int n = g.num_qubits();
  DiagonalGate out = DiagonalGate::identity(n);
  for (int q = 0; q < n; ++q) {
    const double theta = g.phase(qubit_bit(n, q)) - g.phase(0);
    out = compose(out, DiagonalGate::z(n, q, theta));
  }
  return out;
}

DiagonalGate entangling_part(const DiagonalGate& g) {
  const DiagonalGate single = single_qubit_part(g);
  std::vector<double> rest(g.dimension());
  for (std::size_t x = 0; x < rest.size(); ++x) rest[x] = g.phase(x) - single.phase(x);
  return canonicalize(DiagonalGate(g.num_qubits(), std::move(rest)));
}

DiagonalGate embed(const DiagonalGate& g, int num_qubits, std::span<const int> qubits) {
  if (static_cast<int>(qubits.size()) != g.num_qubits()) {
    throw ValidationError("embedding needs one target qubit per gate rail");
  }
  std::uint32_t used = 0;
  for (int q : qubits) {
    const std::uint32_t bit = qubit_bit(num_qubits, q);
    if (used & bit) throw ValidationError("embedding target qubits must be distinct");
    used |= bit;
  }
  std::vector<double> phases(std::size_t{1} << num_qubits);
  for (std::size_t x = 0; x < phases.size(); ++x) {
    std::size_t sub = 0;
    for (int q : qubits) sub = (sub << 1) | ((x & qubit_bit(num_qubits, q)) ? 1u : 0u);
    phases[x] = g.phase(sub);
  }
  return DiagonalGate(num_qubits, std::move(phases));
}

}  // namespace donorgate::gates

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

#include "donorgate/identities.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "donorgate/circuit.hpp"
#include "donorgate/gate_algebra.hpp"

namespace donorgate::verify {

namespace {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

// Dense gates assembled from 2x2 factors.
struct Oracle {
  bool corrupt = false;

  Mat eye() const { return Mat::Identity(2, 2); }
  Mat x() const {
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1.0;
    return m;
  }
  Mat z(double theta) const {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = corrupt ? std::polar(1.0, theta) : cd(1.0);
    m(1, 1) = corrupt ? cd(1.0) : std::polar(1.0, theta);
    return m;
  }
  Mat proj1() const {
    Mat m = Mat::Zero(2, 2);
    m(1, 1) = 1.0;
    return m;
  }

  // `m` on `qubit`, identity elsewhere.
  Mat on(int n, int qubit, const Mat& m) const {
    Mat out = Mat::Identity(1, 1);
    for (int q = 0; q < n; ++q) out = kron(out, q == qubit ? m : eye());
    return out;
  }
  Mat cz(int n, int q1, int q2, double phi) const {
    Mat p = Mat::Identity(1, 1);
    for (int q = 0; q < n; ++q) p = kron(p, (q == q1 || q == q2) ? proj1() : eye());
    const auto dim = p.rows();
    return Mat::Identity(dim, dim) + (std::polar(1.0, phi) - 1.0) * p;
  }
  // Z_a on q1, Z_b on q2, CZ_c between them.
  Mat zzc(int n, int q1, int q2, double a, double b, double c) const {
    return on(n, q1, z(a)) * on(n, q2, z(b)) * cz(n, q1, q2, c);
  }
  Mat cycle(int n, int q1, int q2, const gates::CycleParams& p) const {
    return zzc(n, q1, q2, p.a + p.d, p.b + p.e, p.c + p.f);
  }
};

// Max entrywise difference after aligning the global phase of b to a.
double distance_up_to_phase(const Mat& a, const Mat& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  cd phase = a(r, c) / b(r, c);
  phase /= std::abs(phase);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

double angle_error(double x, double y) { return std::abs(gates::wrap_phase(x - y)); }

class Tracker {
 public:
  Tracker(std::string name, double tolerance) : result_{std::move(name), 0.0, tolerance, 0} {}
  void add(double error) {
    result_.max_error = std::isfinite(error) ? std::max(result_.max_error, error) : INFINITY;
  }
  void count() { ++result_.cases; }
  IdentityResult result() const { return result_; }

 private:
  IdentityResult result_;
};

constexpr double kAlgebraTolerance = 1e-9;
constexpr double kCircuitTolerance = 1e-12;

}  // namespace

std::vector<IdentityResult> verify_gate_identities(const IdentityOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const Oracle o{options.corrupt_convention};

  Tracker round_trip("zzc decomposition round trip", kAlgebraTolerance);
  Tracker symmetric("determinant-one form mapping", kAlgebraTolerance);
  Tracker three_stage("three-stage cycle composition", kAlgebraTolerance);
  Tracker double_cycle("ancilla-refocused double-cycle", kAlgebraTolerance);
  Tracker a_free("double-cycle independent of a", kAlgebraTolerance);
  Tracker g_phase("double-cycle data phase g = 2b + c + e", kAlgebraTolerance);
  Tracker composite("data-refocused composite", kAlgebraTolerance);
  Tracker g_cancel("composite cancels g", kAlgebraTolerance);

  const Mat x0_2 = o.on(2, 0, o.x());
  const Mat x_all = o.on(3, 0, o.x()) * o.on(3, 1, o.x()) * o.on(3, 2, o.x());

  auto composite_oracle = [&](const gates::DoubleCycleParams& dc1, const gates::DoubleCycleParams& dc2) -> Mat {
    return o.cycle(3, 1, 2, dc2.without_dwell) * o.on(3, 1, o.x()) * o.cycle(3, 1, 2, dc2.with_dwell) *
           o.on(3, 2, o.x()) * o.cycle(3, 0, 2, dc1.without_dwell) * o.on(3, 0, o.x()) *
           o.cycle(3, 0, 2, dc1.with_dwell);
  };
  // Splits X^{all} . diag into single-qubit angles and the remaining phases.
  struct Split {
    double theta[3];
    double rest[8];
  };
  auto split_oracle = [&](const Mat& chain) {
    const Mat d = x_all.adjoint() * chain;
    Split s{};
    const double ref = std::arg(d(0, 0));
    double ph[8];
    for (int k = 0; k < 8; ++k) ph[k] = std::arg(d(k, k)) - ref;
    s.theta[0] = ph[4];
    s.theta[1] = ph[2];
    s.theta[2] = ph[1];
    for (int k = 0; k < 8; ++k) {
      s.rest[k] = ph[k] - ((k & 4) ? s.theta[0] : 0.0) - ((k & 2) ? s.theta[1] : 0.0) - ((k & 1) ? s.theta[2] : 0.0);
    }
    double off = 0.0;
    for (int i = 0; i < 8; ++i) {
      for (int j = 0; j < 8; ++j) {
        if (i != j) off = std::max(off, std::abs(d(i, j)));
      }
    }
    s.rest[0] += off;  // any off-diagonal weight shows up as an error
    return s;
  };
  const gates::CycleParams zero_dwell{0, 0, 0, 0, 0, kPi, 0};
  const Split reference = split_oracle(composite_oracle({zero_dwell, {}}, {zero_dwell, {}}));
  const Mat cz_cz = o.cz(3, 0, 2, kPi) * o.cz(3, 1, 2, kPi);

  for (int t = 0; t < options.trials; ++t) {
    {
      std::vector<double> phases(4);
      for (auto& p : phases) p = 3.0 * angle(rng);
      const gates::DiagonalGate g(2, phases);
      const gates::ZzcAngles z = gates::extract_zzc(g);
      round_trip.add(gates::phase_distance(gates::build_zzc(z), g));
      round_trip.add(distance_up_to_phase(o.zzc(2, 0, 1, z.a, z.b, z.c), g.matrix()));
      round_trip.count();
    }
    {
      const double al = angle(rng), be = angle(rng), ga = angle(rng);
      Mat u = Mat::Zero(4, 4);
      u(0, 0) = std::polar(1.0, al);
      u(1, 1) = std::polar(1.0, be);
      u(2, 2) = std::polar(1.0, ga);
      u(3, 3) = std::polar(1.0, -(al + be + ga));
      symmetric.add((u - std::polar(1.0, al) * o.zzc(2, 0, 1, ga - al, be - al, -2.0 * (be + ga))).cwiseAbs().maxCoeff());
      symmetric.count();
    }
    {
      const gates::CycleParams s1{angle(rng), angle(rng), angle(rng), 0, 0, 0, 0};
      const gates::CycleParams s2{0, 0, 0, angle(rng), angle(rng), angle(rng), 1.0};
      const gates::CycleParams s3{angle(rng), angle(rng), angle(rng), 0, 0, 0, 0};
      const Mat chain = o.cycle(2, 0, 1, s3) * o.cycle(2, 0, 1, s2) * o.cycle(2, 0, 1, s1);
      const gates::CycleParams net{s1.a + s3.a, s1.b + s3.b, s1.c + s3.c, s2.d, s2.e, s2.f, s2.tau};
      three_stage.add(distance_up_to_phase(chain, net.gate().matrix()));
      const gates::CycleParams combined = gates::combine_cycles(gates::combine_cycles(s1, s2), s3);
      three_stage.add(gates::phase_distance(combined.gate(), net.gate()));
      three_stage.count();
    }
    {
      const double a = angle(rng), a2 = angle(rng), b = angle(rng), c = angle(rng), d = angle(rng), e = angle(rng);
      const gates::CycleParams c1{a, b, c, d, e, kPi, 1.0};
      const gates::CycleParams c2{a, b, c, 0, 0, 0, 0};
      const double g = 2.0 * b + c + e;
      const Mat chain = o.cycle(2, 0, 1, c2) * x0_2 * o.cycle(2, 0, 1, c1);
      const Mat rhs = x0_2 * o.zzc(2, 0, 1, d, g, kPi);
      const gates::FlippedDiagonal net = gates::double_cycle_net(c1, c2);
      double_cycle.add(distance_up_to_phase(chain, rhs));
      double_cycle.add(distance_up_to_phase(chain, net.matrix()));
      double_cycle.count();

      gates::CycleParams c1b = c1, c2b = c2;
      c1b.a = c2b.a = a2;
      const Mat chain_b = o.cycle(2, 0, 1, c2b) * x0_2 * o.cycle(2, 0, 1, c1b);
      a_free.add(distance_up_to_phase(chain, chain_b));
      a_free.add(distance_up_to_phase(net.matrix(), gates::double_cycle_net(c1b, c2b).matrix()));
      a_free.count();

      const gates::ZzcAngles z = gates::extract_zzc(net.diag);
      g_phase.add(angle_error(z.b, g));
      g_phase.add(angle_error(z.a, d));
      g_phase.add(angle_error(z.c, kPi));
      g_phase.add(net.x_mask == gates::qubit_bit(2, 0) ? 0.0 : 1.0);
      g_phase.count();
    }
    {
      const double b = angle(rng), c = angle(rng), e = angle(rng);
      auto draw_dc = [&](double bb, double cc, double ee) {
        const double a = angle(rng), d = angle(rng);
        return gates::DoubleCycleParams{{a, bb, cc, d, ee, kPi, 1.0}, {a, bb, cc, 0, 0, 0, 0}};
      };
      const gates::DoubleCycleParams dc1 = draw_dc(b, c, e), dc2 = draw_dc(b, c, e);
      const Mat chain = composite_oracle(dc1, dc2);
      const gates::CompositeIdeal ideal = gates::composite_ideal(dc1, dc2);
      composite.add(distance_up_to_phase(chain, ideal.net.matrix()));
      composite.add(distance_up_to_phase(x_all * cz_cz * o.on(3, 0, o.z(dc1.with_dwell.d)) *
                                             o.on(3, 1, o.z(dc2.with_dwell.d + kPi)),
                                         chain));
      composite.add(ideal.net.x_mask == 7u ? 0.0 : 1.0);
      composite.count();

      const Split s = split_oracle(chain);
      for (int k = 0; k < 8; ++k) g_cancel.add(angle_error(s.rest[k], reference.rest[k]));
      g_cancel.add(angle_error(s.theta[2], reference.theta[2]));
      g_cancel.add(gates::phase_distance(ideal.entangling, gates::compose(gates::DiagonalGate::cz(3, 0, 2, kPi),
                                                                           gates::DiagonalGate::cz(3, 1, 2, kPi))));
      g_cancel.add(angle_error(ideal.single_qubit.phase(1), reference.theta[2]));
      g_cancel.count();
    }
  }
  return {round_trip.result(), symmetric.result(), three_stage.result(), double_cycle.result(),
          a_free.result(),     g_phase.result(),   composite.result(),   g_cancel.result()};
}

namespace {

using gates::Op;
using gates::PureState;

PureState random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<cd> amps(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& a : amps) {
    a = {normal(rng), normal(rng)};
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return PureState(n, std::move(amps));
}

PureState plus_state(int n) {
  return PureState(n, std::vector<cd>(std::size_t{1} << n, cd(1.0 / std::sqrt(double(1u << n)))));
}

// Test inputs: every basis state, |+...+>, and `count` random states.
std::vector<PureState> inputs(int n, int count, std::mt19937_64& rng) {
  std::vector<PureState> out;
  for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) out.push_back(PureState::basis(n, k));
  out.push_back(plus_state(n));
  for (int k = 0; k < count; ++k) out.push_back(random_state(n, rng));
  return out;
}

// CZ with phase -1 on |11> of a two-qubit state (|01> when corrupted).
PureState apply_cz(const PureState& s, bool corrupt) {
  std::vector<cd> amps(s.amplitudes().begin(), s.amplitudes().end());
  amps[corrupt ? 1 : 3] *= -1.0;
  return PureState(2, std::move(amps));
}

// Checks that every branch of the circuit with non-negligible probability
// leaves `ancillas` (|0> each, prepended) and `expected` on the data rails.
void check_branches(Tracker& tracker, const std::vector<gates::Branch>& branches, int ancillas,
                    const PureState& expected) {
  const PureState target = PureState::product(PureState::basis(ancillas, 0), expected);
  double total = 0.0;
  for (const auto& b : branches) {
    total += b.probability;
    const bool all_zero = std::all_of(b.outcomes.begin(), b.outcomes.end(), [](int o) { return o == 0; });
    if (!all_zero) {
      tracker.add(b.probability);  // outcomes other than 0 never occur
      continue;
    }
    tracker.add(std::abs(b.probability - 1.0));
    if (b.state) {
      tracker.add(gates::state_distance(*b.state, target));
    } else {
      tracker.add(1.0);
    }
  }
  tracker.add(std::abs(total - 1.0));
  tracker.count();
}

}  // namespace

std::vector<IdentityResult> verify_universality(const UniversalityOptions& options) {
  std::mt19937_64 rng(options.seed);
  const bool bad = options.corrupt_convention;

  Tracker reduce("discarded-ancilla CZ", kCircuitTolerance);
  Tracker data_data("ancilla-mediated data-data CZ", kCircuitTolerance);
  Tracker via_composite("data-data CZ from composite gates", kCircuitTolerance);
  Tracker indirect("indirect data measurement", kCircuitTolerance);
  Tracker prepare("preparation by measurement", kCircuitTolerance);

  // Rails: ancilla1, ancilla2 |0>, data. The data-ancilla pair is stored
  // as (ancilla1, data) and ancilla2 is slotted in between.
  for (const PureState& psi : inputs(2, options.random_states, rng)) {
    std::vector<cd> amps(8, 0.0);
    for (std::size_t x = 0; x < 4; ++x) amps[((x & 2) << 1) | (x & 1)] = psi.amplitude(x);
    const Op ops[] = {Op::cz(0, 2), Op::cz(1, 2), Op::measure(1)};
    const auto branches = gates::simulate_circuit(PureState(3, amps), ops);
    const PureState want = apply_cz(psi, bad);
    double total = 0.0;
    for (const auto& b : branches) {
      total += b.probability;
      if (b.outcomes[0] == 1) {
        reduce.add(b.probability);
        continue;
      }
      std::vector<cd> w(8, 0.0);
      for (std::size_t x = 0; x < 4; ++x) w[((x & 2) << 1) | (x & 1)] = want.amplitude(x);
      reduce.add(b.state ? gates::state_distance(*b.state, PureState(3, w)) : 1.0);
    }
    reduce.add(std::abs(total - 1.0));
    reduce.count();
  }

  // Rails: ancilla |0>, data1, data2.
  for (const PureState& psi : inputs(2, options.random_states, rng)) {
    const PureState initial = PureState::product(PureState::basis(1, 0), psi);
    const Op ops[] = {Op::h(0), Op::cz(0, 1), Op::h(0), Op::cz(0, 2), Op::h(0),
                      Op::cz(0, 1), Op::h(0), Op::measure(0)};
    check_branches(data_data, gates::simulate_circuit(initial, ops), 1, apply_cz(psi, bad));
  }

  // Each ancilla-data CZ above becomes a composite CZ pair with a second,
  // freshly reset ancilla. Rails: ancilla, ancilla2 |0>, data1, data2.
  for (const PureState& psi : inputs(2, options.random_states, rng)) {
    const PureState initial = PureState::product(PureState::basis(2, 0), psi);
    const Op ops[] = {Op::h(0),     Op::cz(0, 2), Op::cz(1, 2), Op::reset(1), Op::h(0),
                      Op::cz(0, 3), Op::cz(1, 3), Op::reset(1), Op::h(0),     Op::cz(0, 2),
                      Op::cz(1, 2), Op::reset(1), Op::h(0),     Op::measure(0)};
    check_branches(via_composite, gates::simulate_circuit(initial, ops), 2, apply_cz(psi, bad));
  }

  // Ancilla |0>, H, CZ, H, measure: outcome k with the data's Born
  // probability for k, leaving the data in |k>.
  std::vector<PureState> singles = inputs(1, options.random_states, rng);
  singles.push_back(PureState(1, {std::sqrt(0.3), std::sqrt(0.7)}));
  for (const PureState& psi : singles) {
    const PureState initial = PureState::product(PureState::basis(1, 0), psi);
    const Op ops[] = {Op::h(0), Op::cz(0, 1), Op::h(0), Op::measure(0)};
    for (const auto& b : gates::simulate_circuit(initial, ops)) {
      const int k = b.outcomes[0];
      const double born = std::norm(psi.amplitude(static_cast<std::size_t>(bad ? 1 - k : k)));
      indirect.add(std::abs(b.probability - born));
      if (b.state) indirect.add(gates::state_distance(*b.state, PureState::basis(2, static_cast<std::size_t>(3 * k))));
    }
    indirect.count();

    const Op reset[] = {Op::reset(0)};
    for (const auto& b : gates::simulate_circuit(psi, reset)) {
      if (b.state) prepare.add(gates::state_distance(*b.state, PureState::basis(1, bad ? 1 : 0)));
    }
    prepare.count();
  }

  return {reduce.result(), data_data.result(), via_composite.result(), indirect.result(), prepare.result()};
}

bool all_passed(const std::vector<IdentityResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const IdentityResult& r) { return r.passed(); });
}

}  // namespace donorgate::verify

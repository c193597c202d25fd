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


#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "donorgate/dynamics.hpp"
#include "donorgate/errors.hpp"
#include "donorgate/gate_algebra.hpp"

using namespace donorgate;
using namespace donorgate::dynamics;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDt = 1.25e-4;

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

double wrap(double x) { return std::remainder(x, 2.0 * kPi); }

// Hamiltonian from Pauli matrices, independent of spin::hamiltonian.
Matrix4cd pauli_hamiltonian(const spin::SpinPairParams& p, double a_mhz) {
  using M2 = Eigen::Matrix2cd;
  const std::complex<double> i(0.0, 1.0);
  M2 sx, sy, sz, id = M2::Identity();
  sx << 0, 0.5, 0.5, 0;
  sy << 0, -0.5 * i, 0.5 * i, 0;
  sz << 0.5, 0, 0, -0.5;
  auto kron = [](const M2& a, const M2& b) {
    Matrix4cd out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
    return out;
  };
  const double a = 2.0 * kPi * 1e-3 * a_mhz;
  return p.b_mt * (p.constants.gyro_electron * kron(sz, id) - p.constants.gyro_phosphorus * kron(id, sz)) +
         a * (kron(sx, sx) + kron(sy, sy) + kron(sz, sz));
}

// Ramp-dwell-ramp field written out directly from the pulse definition.
double oracle_field(double e_start, double e_rop, double ramp, double tau, double t) {
  auto s = [](double x) { return x * x * x * (10.0 + x * (-15.0 + 6.0 * x)); };
  if (t <= ramp) return e_start + (e_rop - e_start) * s(t / ramp);
  if (t <= ramp + tau) return e_rop;
  return e_rop + (e_start - e_rop) * s((t - ramp - tau) / ramp);
}

// Brute-force product with its own uniform step across the whole timeline.
Matrix4cd brute_force(const spin::SpinPairParams& p, double e_start, double e_rop, double ramp, double tau,
                      std::size_t steps) {
  const double total = 2.0 * ramp + tau;
  const double h = total / static_cast<double>(steps);
  Matrix4cd u = Matrix4cd::Identity();
  Eigen::SelfAdjointEigenSolver<Matrix4cd> solver;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = (static_cast<double>(k) + 0.5) * h;
    solver.compute(pauli_hamiltonian(p, p.hyperfine.at(oracle_field(e_start, e_rop, ramp, tau, t))));
    Eigen::Vector4cd phases;
    for (int j = 0; j < 4; ++j) phases(j) = std::polar(1.0, -solver.eigenvalues()(j) * h);
    u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint() * u;
  }
  return u;
}

double flip_flop_at(const spin::SpinPairParams& p, double ramp, double tau, double dt = kDt) {
  const double steps = std::ceil(ramp / dt - 1e-9);
  const control::ShuttleSchedule s(12.0, 1.0, ramp, tau, ramp / steps);
  return flip_flop_probability(propagate(p, s), spin::eigenbasis(p, 0.0));
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("hermitian_exp matches the matrix exponential") {
    const spin::SpinPairParams p;
    const Matrix4cd h = spin::hamiltonian(p, 117.0);
    for (double t : {0.0, 0.01, 1.0, 7.3}) {
      const Matrix4cd reference = (std::complex<double>(0.0, -t) * h).exp();
      CHECK(max_diff(hermitian_exp(h, t), reference) < 1e-10);
    }
  }

  TEST_CASE("constant Hamiltonian is exact") {
    const spin::SpinPairParams p;
    const control::ShuttleSchedule flat(1.0, 1.0, 0.5, 3.0, 1e-3);
    const Propagation u = propagate(p, flat);
    const Matrix4cd h = spin::hamiltonian(p, 117.0);
    CHECK(max_diff(u.unitary, (std::complex<double>(0.0, -flat.duration()) * h).exp()) < 1e-10);
    CHECK(u.max_unitarity_defect < 1e-9);
    CHECK(u.step_count == 500 + 500 + 3000);
  }

  TEST_CASE("zero coupling gives Zeeman phases only") {
    spin::SpinPairParams p;
    spin::AnalyticHyperfine off;
    off.a_max_mhz = 0.0;
    p.hyperfine = spin::HyperfineModel(off);
    const control::ShuttleSchedule s(12.0, 1.0, 1.0, 2.0, kDt);
    const Propagation u = propagate(p, s);
    const double ws = p.b_mt * p.constants.gyro_electron, wp = p.b_mt * p.constants.gyro_phosphorus;
    const double energies[4] = {0.5 * (ws - wp), 0.5 * (ws + wp), -0.5 * (ws + wp), -0.5 * (ws - wp)};
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(4, 4);
    for (int k = 0; k < 4; ++k) expected(k, k) = std::polar(1.0, -energies[k] * s.duration());
    CHECK(max_diff(u.unitary, expected) < 1e-9);
    CHECK(flip_flop_probability(u) == 0.0);
  }

  TEST_CASE("refinement oracle") {
    const spin::SpinPairParams p;
    const double ramp = 0.5, tau = 0.1;
    const control::ShuttleSchedule s(12.0, 1.0, ramp, tau, kDt);
    const Propagation u = propagate(p, s);
    const auto steps = static_cast<std::size_t>(std::llround(100.0 * (2.0 * ramp + tau) / kDt));
    const Matrix4cd oracle = brute_force(p, 12.0, 1.0, ramp, tau, steps);
    CHECK(max_diff(u.unitary, oracle) < 1e-7);
    CHECK(u.max_unitarity_defect < 1e-9);
  }

  TEST_CASE("second-order convergence") {
    const spin::SpinPairParams p;
    const Eigen::MatrixXcd reference = propagate(p, control::ShuttleSchedule(12.0, 1.0, 0.5, 0.5, 1.5625e-5)).unitary;
    std::vector<double> xs, ys;
    for (double dt : {4e-3, 2e-3, 1e-3, 5e-4}) {
      const Propagation u = propagate(p, control::ShuttleSchedule(12.0, 1.0, 0.5, 0.5, dt));
      CHECK(u.max_unitarity_defect < 1e-9);
      xs.push_back(std::log(dt));
      ys.push_back(std::log(max_diff(u.unitary, reference)));
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      sx += xs[k];
      sy += ys[k];
      sxx += xs[k] * xs[k];
      sxy += xs[k] * ys[k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
  }

  TEST_CASE("default step is converged") {
    const spin::SpinPairParams p;
    const control::ShuttleSchedule s(12.0, 1.0, 2.0, 4.2735, kDt);
    const Propagation coarse = propagate(p, s);
    const Propagation fine = propagate(p, control::ShuttleSchedule(12.0, 1.0, 2.0, 4.2735, kDt / 2));
    CHECK(max_diff(coarse.unitary, fine.unitary) < 1e-8);
    CHECK(coarse.max_unitarity_defect < 1e-9);
    CHECK(fine.max_unitarity_defect < 1e-9);
  }

  TEST_CASE("sampled and gridded timelines agree") {
    const spin::SpinPairParams p;
    const control::ShuttleSchedule s(12.0, 1.0, 0.5, 0.5, 1e-3);
    const Propagation from_samples = propagate(p, s.samples(), 1e-3);
    CHECK(max_diff(from_samples.unitary, propagate(p, s).unitary) < 1e-6);
    CHECK(from_samples.max_unitarity_defect < 1e-9);
  }

  TEST_CASE("flip-flop probability examples") {
    CHECK(flip_flop_probability(Eigen::MatrixXcd::Identity(4, 4)) == 0.0);
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(4, 4);
    for (int k = 0; k < 4; ++k) diag(k, k) = std::polar(1.0, 0.3 * k);
    CHECK(flip_flop_probability(diag) == 0.0);
    Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = 1.0;
    swap(1, 2) = swap(2, 1) = 1.0;
    CHECK(flip_flop_probability(swap) == doctest::Approx(1.0));
    CHECK_THROWS_AS(flip_flop_probability(Eigen::MatrixXcd::Identity(8, 8)), ValidationError);
  }

  TEST_CASE("calibrated dwell gives a pi conditional phase") {
    const spin::SpinPairParams p;
    const double tau = kPi / std::abs(spin::cz_rate(p, 117.0));
    const control::ShuttleSchedule s(12.0, 1.0, 2.0, tau, kDt);
    const CycleResult with_dwell = adiabatic_cycle(p, s);
    const CycleResult without = adiabatic_cycle(p, s.with_dwell(0.0));
    CHECK(std::abs(std::abs(with_dwell.params.f) - kPi) < 1e-6);
    const double simulated = wrap(with_dwell.params.c + with_dwell.params.f - without.params.c);
    CHECK(std::abs(std::abs(simulated) - kPi) < 1e-6);
    CHECK(with_dwell.leakage < 1e-6);
    // The transit part does not depend on the dwell.
    CHECK(std::abs(wrap(with_dwell.params.c - without.params.c)) < 1e-6);
  }

  TEST_CASE("dwell phases follow the adiabatic energies") {
    const spin::SpinPairParams p;
    const auto es = spin::eigensystem(p, 117.0);
    const gates::CycleParams d = dwell_phases(p, 117.0, 0.7);
    CHECK(d.d == doctest::Approx(wrap(-(es.energies[2] - es.energies[0]) * 0.7)));
    CHECK(d.e == doctest::Approx(wrap(-(es.energies[1] - es.energies[0]) * 0.7)));
    CHECK(d.f == doctest::Approx(wrap(-spin::cz_rate(p, 117.0) * 0.7)));
  }

  TEST_CASE("determinism") {
    const spin::SpinPairParams p;
    const control::ShuttleSchedule s(12.0, 1.0, 4.0, 0.0, kDt);
    const CycleResult first = adiabatic_cycle(p, s);
    const CycleResult second = adiabatic_cycle(p, s);
    CHECK((first.propagation.unitary.array() == second.propagation.unitary.array()).all());
    CHECK(std::abs(first.params.c - second.params.c) < 1e-12);
    CHECK(first.params.d == 0.0);
    CHECK(first.params.f == 0.0);
  }

  TEST_CASE("faster ramps leak more") {
    // Ten ramp times on a factor-two ladder.
    const spin::SpinPairParams p;
    std::vector<double> probs;
    for (int k = 9; k >= 0; --k) probs.push_back(flip_flop_at(p, 0.125 * std::ldexp(1.0, k), 4.2735));
    for (std::size_t k = 1; k < probs.size(); ++k) CHECK(probs[k] + 1e-12 >= probs[k - 1]);
    CHECK(probs.back() > 1e-4);
    CHECK(probs.front() < 1e-12);
  }

  TEST_CASE("time stretching does not increase flip-flops") {
    const spin::SpinPairParams p;
    const double base = flip_flop_at(p, 2.0, 4.2735);
    CHECK(base < 1e-4);
    double previous = base;
    for (double factor : {2.0, 4.0, 8.0}) {
      const double stretched = flip_flop_at(p, 2.0 * factor, 4.2735 * factor);
      CHECK(stretched <= previous + 1e-12);
      previous = stretched;
    }
  }

  TEST_CASE("larger field protects against flip-flops") {
    double previous = 1.0;
    for (double b : {50.0, 75.0, 100.0, 150.0, 200.0}) {
      spin::SpinPairParams p;
      p.b_mt = b;
      const double prob = flip_flop_at(p, 2.0, 4.2735);
      CHECK(prob < previous);
      previous = prob;
    }
  }

  TEST_CASE("errors") {
    const spin::SpinPairParams p;
    std::vector<control::Sample> uneven{{0.0, 1.0}, {0.1, 1.0}, {0.25, 1.0}};
    CHECK_THROWS_AS(propagate(p, uneven, 0.1), ValidationError);
    CHECK_THROWS_AS(propagate(p, std::vector<control::Sample>{{0.0, 1.0}}, 0.1), ValidationError);

    const std::vector<control::TimeGrid> gap{{0.0, 0.1, 10}, {1.5, 0.1, 10}};
    CHECK_THROWS_AS(propagate(p, gap, [](double) { return 1.0; }), ValidationError);
    const std::vector<control::TimeGrid> grid{{0.0, 0.1, 10}};
    CHECK_THROWS_AS(propagate(p, grid, [](double) { return std::nan(""); }), NumericalError);

    spin::SpinPairParams zero_field;
    zero_field.b_mt = 0.0;
    CHECK_THROWS_AS(adiabatic_cycle(zero_field, control::ShuttleSchedule(12.0, 1.0, 1.0, 1.0, 1e-3)), ValidationError);

    // Near-zero field, sudden ramps and a half-period dwell swap the pair.
    spin::SpinPairParams weak;
    weak.b_mt = 1e-3;
    const double swap_time = kPi / spin::mhz_to_rad_per_ns(117.0);
    CHECK_THROWS_AS(adiabatic_cycle(weak, control::ShuttleSchedule(12.0, 1.0, 1e-4, swap_time, 1e-6)), NumericalError);
  }
}

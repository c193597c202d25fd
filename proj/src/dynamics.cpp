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

#include "donorgate/dynamics.hpp"

#include <cmath>
#include <string>

#include "donorgate/errors.hpp"
#include "donorgate/format.hpp"

namespace donorgate::dynamics {

namespace {

constexpr double kMaxLeakage = 0.5;

Matrix4cd step_hamiltonian(const spin::SpinPairParams& params, double e) {
  if (!std::isfinite(e)) throw NumericalError("field is not finite on the propagation grid");
  const double a = params.hyperfine.at(e);
  if (!std::isfinite(a)) throw NumericalError("hyperfine coupling is not finite at E = " + format_double(e));
  return spin::hamiltonian(params, a);
}

}  // namespace

double unitarity_defect(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd residual = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return residual.cwiseAbs().maxCoeff();
}

Matrix4cd hermitian_exp(const Matrix4cd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
  const auto& v = solver.eigenvectors();
  Eigen::Matrix<std::complex<double>, 4, 1> phases;
  for (int k = 0; k < 4; ++k) phases(k) = std::polar(1.0, -solver.eigenvalues()(k) * t);
  return v * phases.asDiagonal() * v.adjoint();
}

Propagation propagate(const spin::SpinPairParams& params, std::span<const control::TimeGrid> grids,
                      const FieldFunction& field) {
  params.validate();
  Matrix4cd u = Matrix4cd::Identity();
  std::size_t steps = 0;
  double expected_start = grids.empty() ? 0.0 : grids.front().start;
  for (const control::TimeGrid& grid : grids) {
    if (grid.steps == 0) continue;
    if (!(grid.step > 0.0) || !std::isfinite(grid.step)) throw ValidationError("grid step must be positive");
    if (std::abs(grid.start - expected_start) > 1e-9 * std::max(1.0, std::abs(expected_start))) {
      throw ValidationError("propagation grids must be contiguous");
    }
    for (std::size_t k = 0; k < grid.steps; ++k) {
      const Matrix4cd h = step_hamiltonian(params, field(grid.midpoint(k)));
      u = hermitian_exp(h, grid.step) * u;
    }
    steps += grid.steps;
    expected_start = grid.end();
  }
  Propagation out{u, steps, 0.0};
  out.max_unitarity_defect = unitarity_defect(out.unitary);
  return out;
}

Propagation propagate(const spin::SpinPairParams& params, std::span<const control::Sample> samples,
                      double dt) {
  if (samples.size() < 2) throw ValidationError("timeline needs at least two samples");
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  params.validate();
  Matrix4cd u = Matrix4cd::Identity();
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const double h_t = samples[k + 1].t - samples[k].t;
    if (std::abs(h_t - dt) > 1e-9 * dt) throw ValidationError("timeline samples are not uniformly spaced at dt");
    const Matrix4cd h = step_hamiltonian(params, 0.5 * (samples[k].e + samples[k + 1].e));
    u = hermitian_exp(h, dt) * u;
  }
  Propagation out{u, samples.size() - 1, 0.0};
  out.max_unitarity_defect = unitarity_defect(out.unitary);
  return out;
}

Propagation propagate(const spin::SpinPairParams& params, const control::ShuttleSchedule& schedule,
                      const control::ShiftSpec& shift, double time_offset) {
  const auto grids = schedule.grids();
  return propagate(params, grids, [&](double t) {
    return schedule.field_at(t) + shift.offset_at(time_offset + t);
  });
}

double flip_flop_probability(const Eigen::MatrixXcd& u, const Matrix4cd& endpoint_basis) {
  if (u.rows() != 4 || u.cols() != 4) throw ValidationError("flip-flop probability needs a 4x4 propagator");
  const Matrix4cd rotated = endpoint_basis.adjoint() * u * endpoint_basis;
  return std::max(std::norm(rotated(1, 2)), std::norm(rotated(2, 1)));
}

double flip_flop_probability(const Propagation& p, const Matrix4cd& endpoint_basis) {
  return flip_flop_probability(p.unitary, endpoint_basis);
}

gates::CycleParams dwell_phases(const spin::SpinPairParams& params, double a_mhz, double tau) {
  gates::CycleParams out;
  out.tau = tau;
  if (tau == 0.0) return out;
  const spin::Eigensystem sys = spin::eigensystem(params, a_mhz);
  const auto& en = sys.energies;
  // basis index 2 = electron flipped (ancilla |1>), 1 = nucleus flipped (data |1>)
  out.d = gates::wrap_phase(-(en[2] - en[0]) * tau);
  out.e = gates::wrap_phase(-(en[1] - en[0]) * tau);
  out.f = gates::wrap_phase(-(en[0] - en[1] - en[2] + en[3]) * tau);
  return out;
}

CycleResult adiabatic_cycle(const spin::SpinPairParams& params, const control::ShuttleSchedule& schedule,
                            const control::ShiftSpec& shift, double time_offset) {
  if (!(params.b_mt > 0.0)) throw ValidationError("adiabatic cycle needs B > 0");
  CycleResult out;
  out.propagation = propagate(params, schedule, shift, time_offset);

  const double e_begin = schedule.field_at(0.0) + shift.offset_at(time_offset);
  const double e_end = schedule.field_at(schedule.duration()) +
                       shift.offset_at(time_offset + schedule.duration() - 0.5 * schedule.dt());
  const Matrix4cd v_begin = spin::eigenbasis(params, params.hyperfine.at(e_begin));
  const Matrix4cd v_end = spin::eigenbasis(params, params.hyperfine.at(e_end));
  const Matrix4cd adiabatic = v_end.adjoint() * out.propagation.unitary * v_begin;

  double leakage = 0.0;
  std::vector<double> phases(4);
  for (int k = 0; k < 4; ++k) {
    leakage = std::max(leakage, 1.0 - std::norm(adiabatic(k, k)));
    phases[static_cast<std::size_t>(k)] = std::arg(adiabatic(k, k));
  }
  out.leakage = leakage;
  if (leakage > kMaxLeakage) {
    throw NumericalError("cycle leakage " + format_double(leakage) + " too large to read phases");
  }

  const auto total = gates::extract_zzc(gates::DiagonalGate(2, std::move(phases)));
  const double dwell_field = schedule.e_rop() + shift.offset_at(time_offset + schedule.ramp_time() +
                                                                0.5 * schedule.dwell_time());
  gates::CycleParams cycle = dwell_phases(params, params.hyperfine.at(dwell_field), schedule.dwell_time());
  cycle.a = gates::wrap_phase(total.a - cycle.d);
  cycle.b = gates::wrap_phase(total.b - cycle.e);
  cycle.c = gates::wrap_phase(total.c - cycle.f);
  out.params = cycle;
  return out;
}

}  // namespace donorgate::dynamics

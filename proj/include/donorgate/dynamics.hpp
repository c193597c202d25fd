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

#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Dense>

#include "donorgate/control.hpp"
#include "donorgate/gate_algebra.hpp"
#include "donorgate/spin_model.hpp"

namespace donorgate::dynamics {

using spin::Matrix4cd;

struct Propagation {
  Eigen::MatrixXcd unitary;
  std::size_t step_count = 0;
  double max_unitarity_defect = 0.0;
};

// Largest entry of |U^dagger U - I|.
double unitarity_defect(const Eigen::MatrixXcd& u);

// exp(-i H t) for Hermitian H, through its eigendecomposition.
Matrix4cd hermitian_exp(const Matrix4cd& h, double t);

// Field (MV/m) as a function of time on the propagation grid.
using FieldFunction = std::function<double(double)>;

// U = prod_k exp(-i H(E(t_k + dt/2)) dt) over every grid interval, in time
// order. Grids must be contiguous with positive steps.
Propagation propagate(const spin::SpinPairParams& params, std::span<const control::TimeGrid> grids,
                      const FieldFunction& field);

// Uniformly sampled timeline; the midpoint field is the average of the two
// neighbouring samples.
Propagation propagate(const spin::SpinPairParams& params, std::span<const control::Sample> samples,
                      double dt);

// The schedule with `shift` applied; `time_offset` places the schedule on the
// shift's (protocol) timeline.
Propagation propagate(const spin::SpinPairParams& params, const control::ShuttleSchedule& schedule,
                      const control::ShiftSpec& shift = control::ShiftSpec::none(),
                      double time_offset = 0.0);

// Worst transition probability between the two flip-flop partners
// (up-Down <-> down-Up) after rotating U into `endpoint_basis`.
double flip_flop_probability(const Eigen::MatrixXcd& u, const Matrix4cd& endpoint_basis = Matrix4cd::Identity());
double flip_flop_probability(const Propagation& p, const Matrix4cd& endpoint_basis = Matrix4cd::Identity());

struct CycleResult {
  Propagation propagation;
  gates::CycleParams params;  // transit (a, b, c) and dwell (d, e, f) phases
  double leakage = 0.0;
};

// Dwell phases (d, e, f) of tau ns at constant coupling, from the exact
// adiabatic energies.
gates::CycleParams dwell_phases(const spin::SpinPairParams& params, double a_mhz, double tau);

// Runs one ramp-dwell-ramp cycle and reads its phases in the endpoint
// eigenbasis. Throws NumericalError when leakage exceeds 0.5.
CycleResult adiabatic_cycle(const spin::SpinPairParams& params, const control::ShuttleSchedule& schedule,
                            const control::ShiftSpec& shift = control::ShiftSpec::none(),
                            double time_offset = 0.0);

}  // namespace donorgate::dynamics

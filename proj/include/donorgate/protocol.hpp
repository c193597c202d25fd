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

#include <vector>

#include <Eigen/Dense>

#include "donorgate/control.hpp"
#include "donorgate/dynamics.hpp"
#include "donorgate/gate_algebra.hpp"
#include "donorgate/spin_model.hpp"

namespace donorgate::protocol {

enum class CalibrationMode {
  PureDwell,  // tau = pi / |cz_rate| at the operating point
  Simulated,  // plus one secant step on the simulated dwell conditional phase
};

// Dwell time that makes the dwell conditional phase f(tau) equal pi. Only the
// ramps of `ramps` matter; its dwell time is ignored.
double calibrate_tau(const spin::SpinPairParams& params, const control::ShuttleSchedule& ramps,
                     CalibrationMode mode = CalibrationMode::Simulated);

// Conditional phase of a cycle with dwell tau minus that of the same cycle
// without dwell, both read from simulations.
double simulated_dwell_phase(const spin::SpinPairParams& params, const control::ShuttleSchedule& ramps,
                             double tau);

struct ProtocolOptions {
  // Idle time at the start field before every cycle. Adds Zeeman phase to
  // the transit phases without touching the dwell.
  double pre_idle_ns = 0.0;
  // Idle time between the two double-cycles of the composite gate (travel to
  // the second donor).
  double travel_idle_ns = 0.0;

  void validate() const;
};

// Which dwell phases the ideal reference assumes.
enum class IdealReference {
  Noiseless,      // everything from the noiseless cycles
  DwellAdjusted,  // noiseless transit phases, dwell phases at the shifted field
};

struct ProtocolRun {
  Eigen::MatrixXcd realized;
  Eigen::MatrixXcd ideal;
  gates::FlippedDiagonal ideal_gate;
  std::vector<double> refocus_times;  // ns, ideal instantaneous X pulses
  double duration = 0.0;
  control::ShiftSpec noise;
  double leakage = 0.0;  // largest flip-flop probability over the cycles
};

// Everything shared between runs of one configuration: the schedule with its
// dwell time and the noiseless cycles the ideal reference is built from.
class ProtocolSetup {
 public:
  ProtocolSetup(spin::SpinPairParams params, control::ShuttleSchedule schedule, ProtocolOptions options = {});

  const spin::SpinPairParams& params() const { return params_; }
  const control::ShuttleSchedule& schedule() const { return schedule_; }
  const control::ShuttleSchedule& schedule_without_dwell() const { return schedule_no_dwell_; }
  const ProtocolOptions& options() const { return options_; }
  const gates::DoubleCycleParams& noiseless_cycles() const { return cycles_; }
  double tau() const { return schedule_.dwell_time(); }

  double double_cycle_duration() const;
  double composite_duration() const;
  std::vector<double> double_cycle_refocus_times() const;
  std::vector<double> composite_refocus_times() const;

 private:
  spin::SpinPairParams params_;
  control::ShuttleSchedule schedule_;
  control::ShuttleSchedule schedule_no_dwell_;
  ProtocolOptions options_;
  gates::DoubleCycleParams cycles_;
};

// Cycle with dwell, ideal X on the ancilla, cycle without dwell; rails
// (ancilla, data).
ProtocolRun double_cycle_run(const ProtocolSetup& setup, const control::ShiftSpec& noise = control::ShiftSpec::none(),
                             IdealReference reference = IdealReference::Noiseless);

// Double-cycle on (ancilla1, data), ideal X on data, double-cycle on
// (ancilla2, data); rails (ancilla1, ancilla2, data). The idle ancilla
// precesses under its Zeeman term throughout.
ProtocolRun composite_run(const ProtocolSetup& setup, const control::ShiftSpec& noise = control::ShiftSpec::none(),
                          IdealReference reference = IdealReference::Noiseless);

ProtocolRun double_cycle_run(const spin::SpinPairParams& params, const control::ShuttleSchedule& schedule,
                             double tau, const control::ShiftSpec& noise = control::ShiftSpec::none(),
                             const ProtocolOptions& options = {});
ProtocolRun composite_run(const spin::SpinPairParams& params, const control::ShuttleSchedule& schedule,
                          double tau, const control::ShiftSpec& noise = control::ShiftSpec::none(),
                          const ProtocolOptions& options = {});

}  // namespace donorgate::protocol

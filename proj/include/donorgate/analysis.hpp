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
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "donorgate/control.hpp"
#include "donorgate/gate_algebra.hpp"
#include "donorgate/protocol.hpp"
#include "donorgate/spin_model.hpp"

namespace donorgate::analysis {

// One Z-string channel. `mask` holds the basis-index bit (gates::qubit_bit) of
// every qubit carrying a Z, so qubit 0 is the highest bit.
struct PhaseChannel {
  std::uint32_t mask = 0;
  std::string label;  // e.g. "ZIZ", rail 0 first
  double delta = 0.0;
  double worst_case = 0.0;  // sin^2(delta / 2)
};

struct ChannelReport {
  int num_qubits = 0;
  double leakage = 0.0;
  std::vector<PhaseChannel> channels;  // ordered by mask, mask 0 excluded

  const PhaseChannel& channel(const std::string& label) const;
  double max_phase_probability() const;
};

std::string channel_label(int num_qubits, std::uint32_t mask);

// Z-string expansion of a phase vector:
//   phi_x = mean(phi) - 1/2 sum_S delta_S (-1)^{|S & x|},
// so Z_theta on one qubit has delta = theta on that qubit's channel. Entry 0 of
// the result holds the mean.
std::vector<double> walsh_forward(std::span<const double> phases);
std::vector<double> walsh_inverse(std::span<const double> coefficients);

// Deviation D = realized * ideal^dagger. Leakage is the largest off-diagonal
// row mass of D; the phases of its diagonal, relative to entry 0, are expanded
// in Z-strings.
ChannelReport channel_decompose(const Eigen::MatrixXcd& realized, const Eigen::MatrixXcd& ideal);
ChannelReport channel_decompose(const protocol::ProtocolRun& run);

// Diagonal gate rebuilt from the phase channels (canonical).
gates::DiagonalGate reconstruct_diagonal(const ChannelReport& report);

double worst_case_probability(double delta);

// Runs fn(0..count-1) on up to `jobs` threads. fn must only write to slots
// owned by its index. The exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

struct ShuttleRow {
  double shuttle_time = 0.0;  // ramp duration, ns
  double probability = 0.0;
};

struct ShuttleSweep {
  std::vector<ShuttleRow> rows;
  bool non_increasing = true;  // in the order given, within kProbabilityFloor
  std::optional<double> first_below_threshold;
  double threshold = 1e-4;
};

inline constexpr double kProbabilityFloor = 1e-12;

// Flip-flop probability of one adiabatic cycle per ramp duration. Each ramp is
// sampled at the largest step <= template.dt() that divides it.
ShuttleSweep sweep_shuttle(const spin::SpinPairParams& params, const control::ShuttleSchedule& schedule_template,
                           std::span<const double> shuttle_times, int jobs = 1, double threshold = 1e-4);

struct ShiftRow {
  control::ShiftSpec::Kind kind = control::ShiftSpec::Kind::Static;
  double delta_e = 0.0;
  std::string channel;                // Z-string label or "leakage"
  std::optional<double> delta_rad;    // empty for leakage
  double worst_case_probability = 0.0;
};

struct SlopeFit {
  control::ShiftSpec::Kind kind = control::ShiftSpec::Kind::Static;
  std::string channel;  // Z-string label, or "max" for the largest phase channel
  double slope = 0.0;   // NaN with fewer than two usable points
  int points = 0;
};

struct ShiftSweepOptions {
  std::vector<control::ShiftSpec::Kind> kinds = {control::ShiftSpec::Kind::Static,
                                                 control::ShiftSpec::Kind::Alternating};
  std::vector<double> deltas;
  double fit_min = 1e-3;
  double fit_max = 1e-1;
  protocol::IdealReference reference = protocol::IdealReference::Noiseless;
  int jobs = 1;
};

struct ShiftSweep {
  std::vector<ShiftRow> rows;  // kinds, then deltas in input order, then channels
  std::vector<SlopeFit> slopes;
};

// Composite-gate channels per shift. An alternating shift is applied in turn at
// every refocusing pulse and each channel keeps its largest response.
ShiftSweep sweep_shift(const protocol::ProtocolSetup& setup, const ShiftSweepOptions& options);

// Per-shift channel report for the composite gate; alternating shifts are
// maximized channel by channel over the refocusing pulses.
ChannelReport composite_shift_report(const protocol::ProtocolSetup& setup, control::ShiftSpec::Kind kind,
                                     double delta_e, protocol::IdealReference reference);

// Least-squares slope of log10(y) against log10(x) over points with x in
// [x_min, x_max] and y > 0.
SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y, double x_min, double x_max);

// Random-walk drift: delta_mV * lever_arm * sqrt(t_target / t_reference).
double drift_to_field(double delta_mv, double lever_arm_mv_per_m_per_mv, double t_target, double t_reference);

inline constexpr double kFastReferenceSeconds = 1e-3;
inline constexpr double kSlowReferenceSeconds = 0.1 * 86400.0;

// CSV writers; every line of `header` is emitted behind "# ".
void write_shuttle_csv(std::ostream& out, const ShuttleSweep& sweep, std::span<const std::string> header);
void write_shift_csv(std::ostream& out, const ShiftSweep& sweep, std::span<const std::string> header);

}  // namespace donorgate::analysis

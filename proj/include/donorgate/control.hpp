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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "donorgate/spin_model.hpp"

namespace donorgate::control {

// Uniform run of `steps` intervals of length `step` starting at `start` (ns).
struct TimeGrid {
  double start = 0.0;
  double step = 0.0;
  std::size_t steps = 0;

  double end() const { return start + step * static_cast<double>(steps); }
  double midpoint(std::size_t k) const { return start + (static_cast<double>(k) + 0.5) * step; }
};

struct Sample {
  double t;  // ns
  double e;  // MV/m
};

// Quintic smootherstep 6x^5 - 15x^4 + 10x^3: zero first and second
// derivatives at both ends.
double smootherstep(double x);

// Ramp from e_start to e_rop, dwell for tau, ramp back. The ramps are sampled
// at dt, which must divide ramp_time; the dwell is sampled at the largest
// step <= dt that divides tau (the field is constant there).
class ShuttleSchedule {
 public:
  ShuttleSchedule(double e_start, double e_rop, double ramp_time, double tau, double dt);

  double e_start() const { return e_start_; }
  double e_rop() const { return e_rop_; }
  double ramp_time() const { return ramp_time_; }
  double dwell_time() const { return tau_; }
  double dt() const { return dt_; }
  double duration() const { return 2.0 * ramp_time_ + tau_; }

  // Nominal field (MV/m) at time t in [0, duration()].
  double field_at(double t) const;

  // Ramp-in, dwell and ramp-out grids in time order (the dwell grid is empty
  // when tau = 0).
  std::array<TimeGrid, 3> grids() const;
  std::vector<Sample> samples() const;

  ShuttleSchedule with_dwell(double tau) const;
  ShuttleSchedule with_ramp_time(double ramp_time) const;

 private:
  double e_start_;
  double e_rop_;
  double ramp_time_;
  double tau_;
  double dt_;
  std::size_t ramp_steps_;
};

ShuttleSchedule build_schedule(double e_start, double e_rop, double ramp_time, double tau, double dt);

// A field offset the controller does not know about.
struct ShiftSpec {
  enum class Kind { Static, Alternating };

  Kind kind = Kind::Static;
  double delta_e = 0.0;    // MV/m
  double flip_time = 0.0;  // ns on the protocol timeline, alternating only

  static ShiftSpec none() { return {}; }
  static ShiftSpec static_shift(double delta_e) { return {Kind::Static, delta_e, 0.0}; }
  static ShiftSpec alternating(double delta_e, double flip_time) {
    return {Kind::Alternating, delta_e, flip_time};
  }

  // Static: +delta_e. Alternating: +delta_e/2 before flip_time, -delta_e/2 from it on.
  double offset_at(double t) const;
  // Throws unless delta_e is finite and, for alternating shifts, flip_time
  // lies within [0, timeline_duration].
  void validate(double timeline_duration) const;
};

const char* to_string(ShiftSpec::Kind kind);

std::vector<Sample> apply_shift(std::span<const Sample> samples, const ShiftSpec& spec);
std::vector<Sample> apply_shift(const ShuttleSchedule& schedule, const ShiftSpec& spec);

struct DerivativeReport {
  double max_rate;   // max |dE/dt|, MV/(m ns)
  double max_accel;  // max |d2E/dt2|, MV/(m ns^2)
};

// Three-point central differences over the interior samples (the spacing may
// change between segments).
DerivativeReport derivative_report(std::span<const Sample> samples);

// CSV `t_ns,E_MV_per_m,A_MHz`.
void write_schedule_csv(std::ostream& out, std::span<const Sample> samples,
                        const spin::HyperfineModel& model);

}  // namespace donorgate::control

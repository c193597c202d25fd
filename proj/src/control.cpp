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

#include "donorgate/control.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "donorgate/errors.hpp"
#include "donorgate/format.hpp"

namespace donorgate::control {

namespace {

constexpr double kCommensurateTolerance = 1e-9;

std::size_t steps_for(double duration, double dt) {
  const double ratio = duration / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > kCommensurateTolerance * ratio) {
    throw ValidationError("time step " + format_double(dt) + " ns does not divide ramp time " +
                          format_double(duration) + " ns");
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

double smootherstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

ShuttleSchedule::ShuttleSchedule(double e_start, double e_rop, double ramp_time, double tau, double dt)
    : e_start_(e_start), e_rop_(e_rop), ramp_time_(ramp_time), tau_(tau), dt_(dt), ramp_steps_(0) {
  for (double v : {e_start, e_rop, ramp_time, tau, dt}) {
    if (!std::isfinite(v)) throw ValidationError("schedule parameters must be finite");
  }
  if (ramp_time <= 0.0) throw ValidationError("ramp time must be positive");
  if (tau < 0.0) throw ValidationError("dwell time must be non-negative");
  if (dt <= 0.0) throw ValidationError("time step must be positive");
  ramp_steps_ = steps_for(ramp_time, dt);
}

double ShuttleSchedule::field_at(double t) const {
  const double total = duration();
  const double slack = 1e-12 * total;
  if (!(t >= -slack && t <= total + slack)) {
    throw ValidationError("time " + format_double(t) + " ns outside schedule [0, " +
                          format_double(total) + "]");
  }
  const double span = e_rop_ - e_start_;
  if (t < ramp_time_) return e_start_ + span * smootherstep(t / ramp_time_);
  if (t <= ramp_time_ + tau_) return e_rop_;
  return e_start_ + span * smootherstep((total - t) / ramp_time_);
}

std::array<TimeGrid, 3> ShuttleSchedule::grids() const {
  std::array<TimeGrid, 3> out{};
  out[0] = {0.0, ramp_time_ / static_cast<double>(ramp_steps_), ramp_steps_};
  if (tau_ > 0.0) {
    const auto dwell_steps = static_cast<std::size_t>(std::ceil(tau_ / dt_ * (1.0 - kCommensurateTolerance)));
    out[1] = {ramp_time_, tau_ / static_cast<double>(dwell_steps), dwell_steps};
  } else {
    out[1] = {ramp_time_, 0.0, 0};
  }
  out[2] = {ramp_time_ + tau_, out[0].step, ramp_steps_};
  return out;
}

std::vector<Sample> ShuttleSchedule::samples() const {
  std::vector<Sample> out;
  const auto g = grids();
  out.reserve(g[0].steps + g[1].steps + g[2].steps + 1);
  out.push_back({0.0, field_at(0.0)});
  for (const TimeGrid& grid : g) {
    for (std::size_t k = 1; k <= grid.steps; ++k) {
      // pin the segment end so joints coincide exactly
      const double t = (k == grid.steps) ? grid.end() : grid.start + static_cast<double>(k) * grid.step;
      out.push_back({t, field_at(std::min(t, duration()))});
    }
  }
  return out;
}

ShuttleSchedule ShuttleSchedule::with_dwell(double tau) const {
  return ShuttleSchedule(e_start_, e_rop_, ramp_time_, tau, dt_);
}

ShuttleSchedule ShuttleSchedule::with_ramp_time(double ramp_time) const {
  return ShuttleSchedule(e_start_, e_rop_, ramp_time, tau_, dt_);
}

ShuttleSchedule build_schedule(double e_start, double e_rop, double ramp_time, double tau, double dt) {
  return ShuttleSchedule(e_start, e_rop, ramp_time, tau, dt);
}

double ShiftSpec::offset_at(double t) const {
  if (kind == Kind::Static) return delta_e;
  return t < flip_time ? 0.5 * delta_e : -0.5 * delta_e;
}

void ShiftSpec::validate(double timeline_duration) const {
  if (!std::isfinite(delta_e)) throw ValidationError("field shift must be finite");
  if (kind == Kind::Alternating) {
    if (!std::isfinite(flip_time) || flip_time < 0.0 || flip_time > timeline_duration) {
      throw ValidationError("alternating shift flip time " + format_double(flip_time) +
                            " ns outside the timeline [0, " + format_double(timeline_duration) + "]");
    }
  }
}

const char* to_string(ShiftSpec::Kind kind) {
  return kind == ShiftSpec::Kind::Static ? "static" : "alternating";
}

std::vector<Sample> apply_shift(std::span<const Sample> samples, const ShiftSpec& spec) {
  spec.validate(samples.empty() ? 0.0 : samples.back().t);
  std::vector<Sample> out(samples.begin(), samples.end());
  for (Sample& s : out) s.e += spec.offset_at(s.t);
  return out;
}

std::vector<Sample> apply_shift(const ShuttleSchedule& schedule, const ShiftSpec& spec) {
  spec.validate(schedule.duration());
  return apply_shift(schedule.samples(), spec);
}

DerivativeReport derivative_report(std::span<const Sample> samples) {
  if (samples.size() < 5) throw ValidationError("derivative report needs at least 5 samples");
  DerivativeReport report{0.0, 0.0};
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const double h1 = samples[i].t - samples[i - 1].t;
    const double h2 = samples[i + 1].t - samples[i].t;
    if (!(h1 > 0.0 && h2 > 0.0)) throw ValidationError("samples must be strictly time-ordered");
    const double f0 = samples[i - 1].e;
    const double f1 = samples[i].e;
    const double f2 = samples[i + 1].e;
    const double rate = -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 +
                        h1 / (h2 * (h1 + h2)) * f2;
    const double accel = 2.0 * (f0 / (h1 * (h1 + h2)) - f1 / (h1 * h2) + f2 / (h2 * (h1 + h2)));
    report.max_rate = std::max(report.max_rate, std::abs(rate));
    report.max_accel = std::max(report.max_accel, std::abs(accel));
  }
  return report;
}

void write_schedule_csv(std::ostream& out, std::span<const Sample> samples,
                        const spin::HyperfineModel& model) {
  out << "t_ns,E_MV_per_m,A_MHz\n";
  for (const Sample& s : samples) {
    out << format_double(s.t) << ',' << format_double(s.e) << ',' << format_double(model.at(s.e)) << '\n';
  }
}

}  // namespace donorgate::control

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

#include "donorgate/protocol.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "donorgate/errors.hpp"
#include "donorgate/format.hpp"

namespace donorgate::protocol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxLeakage = 0.5;
constexpr double kCalibrationTolerance = 1e-6;

double total_conditional_phase(const gates::CycleParams& p) { return p.c + p.f; }

// Builds the realized propagator and its ideal counterpart stage by stage on
// a register of 2 (ancilla, data) or 3 (ancilla1, ancilla2, data) qubits.
class Timeline {
 public:
  Timeline(const ProtocolSetup& setup, int num_qubits, const control::ShiftSpec& noise, IdealReference reference)
      : setup_(setup),
        params_(setup.params()),
        n_(num_qubits),
        data_(num_qubits - 1),
        noise_(noise),
        reference_(reference),
        realized_(Eigen::MatrixXcd::Identity(1 << num_qubits, 1 << num_qubits)),
        ideal_(gates::FlippedDiagonal::identity(num_qubits)) {}

  // Ancilla parked at the start field next to the data donor.
  void park(int ancilla, double duration) {
    if (duration <= 0.0) return;
    const double e = setup_.schedule().e_start();
    const double shifted = e + noise_.offset_at(now_ + 0.5 * duration);
    const spin::Matrix4cd u = dynamics::hermitian_exp(
        spin::hamiltonian(params_, params_.hyperfine.at(shifted)), duration);
    const gates::CycleParams idle = dynamics::dwell_phases(params_, params_.hyperfine.at(e), duration);
    apply_pair(ancilla, u, idle.dwell_gate(), duration);
  }

  void cycle(int ancilla, bool with_dwell) {
    const control::ShuttleSchedule& schedule =
        with_dwell ? setup_.schedule() : setup_.schedule_without_dwell();
    const dynamics::Propagation p = dynamics::propagate(params_, schedule, noise_, now_);
    const spin::Matrix4cd basis = spin::eigenbasis(params_, params_.hyperfine.at(schedule.e_start()));
    const double leak = dynamics::flip_flop_probability(p, basis);
    if (leak > kMaxLeakage) {
      throw NumericalError("flip-flop leakage " + format_double(leak) + " in protocol cycle");
    }
    leakage_ = std::max(leakage_, leak);

    gates::CycleParams ideal = with_dwell ? setup_.noiseless_cycles().with_dwell
                                          : setup_.noiseless_cycles().without_dwell;
    if (reference_ == IdealReference::DwellAdjusted && with_dwell) {
      const double dwell_mid = now_ + schedule.ramp_time() + 0.5 * schedule.dwell_time();
      const double e = schedule.e_rop() + noise_.offset_at(dwell_mid);
      const gates::CycleParams dwell = dynamics::dwell_phases(params_, params_.hyperfine.at(e), schedule.dwell_time());
      ideal.d = dwell.d;
      ideal.e = dwell.e;
      ideal.f = dwell.f;
    }
    apply_pair(ancilla, p.unitary, ideal.gate(), schedule.duration());
  }

  void flip(int qubit) {
    const std::uint32_t bit = gates::qubit_bit(n_, qubit);
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(realized_.rows(), realized_.cols());
    for (Eigen::Index k = 0; k < x.rows(); ++k) x(k ^ static_cast<Eigen::Index>(bit), k) = 1.0;
    realized_ = x * realized_;
    ideal_ = ideal_.then_x(qubit);
    pulses_.push_back(now_);
  }

  // Every qubit idles under its Zeeman term alone.
  void idle_all(double duration) {
    if (duration <= 0.0) return;
    std::vector<double> phases(std::size_t{1} << n_, 0.0);
    for (int q = 0; q < n_; ++q) {
      const double theta = zeeman_angle(q, duration);
      const std::uint32_t bit = gates::qubit_bit(n_, q);
      for (std::size_t x = 0; x < phases.size(); ++x) {
        phases[x] += (x & bit) ? 0.5 * theta : -0.5 * theta;
      }
    }
    const gates::DiagonalGate idle(n_, std::move(phases));
    realized_ = idle.matrix() * realized_;
    ideal_ = ideal_.then(idle);
    now_ += duration;
  }

  ProtocolRun finish() && {
    Eigen::MatrixXcd ideal = ideal_.matrix();
    return ProtocolRun{std::move(realized_), std::move(ideal), std::move(ideal_), std::move(pulses_),
                       now_,                 noise_,           leakage_};
  }

 private:
  // Phase of |1> relative to |0> for a lone spin over `duration`.
  double zeeman_angle(int qubit, double duration) const {
    const auto& c = params_.constants;
    if (qubit == data_) return -c.gyro_phosphorus * params_.b_mt * duration;
    return c.gyro_electron * params_.b_mt * duration;
  }

  void apply_pair(int ancilla, const spin::Matrix4cd& u, const gates::DiagonalGate& ideal_pair, double duration) {
    const int pair[] = {ancilla, data_};
    gates::DiagonalGate ideal = gates::embed(ideal_pair, n_, pair);

    const auto dim = realized_.rows();
    const std::uint32_t a_bit = gates::qubit_bit(n_, ancilla);
    const std::uint32_t d_bit = gates::qubit_bit(n_, data_);
    const std::uint32_t pair_bits = a_bit | d_bit;
    std::complex<double> other_phase[2] = {1.0, 1.0};
    std::uint32_t other_bit = 0;
    if (n_ == 3) {
      const int other = (ancilla == 0) ? 1 : 0;
      other_bit = gates::qubit_bit(n_, other);
      const double theta = zeeman_angle(other, duration);
      other_phase[0] = std::polar(1.0, -0.5 * theta);
      other_phase[1] = std::polar(1.0, 0.5 * theta);
      ideal = gates::compose(ideal, gates::DiagonalGate::z(n_, other, theta));
    }
    auto sub = [&](Eigen::Index x) {
      return ((x & a_bit) ? 2 : 0) + ((x & d_bit) ? 1 : 0);
    };
    Eigen::MatrixXcd stage = Eigen::MatrixXcd::Zero(dim, dim);
    for (Eigen::Index x = 0; x < dim; ++x) {
      for (Eigen::Index y = 0; y < dim; ++y) {
        if ((x & ~static_cast<Eigen::Index>(pair_bits)) != (y & ~static_cast<Eigen::Index>(pair_bits))) continue;
        stage(x, y) = u(sub(x), sub(y)) * other_phase[(x & other_bit) ? 1 : 0];
      }
    }
    realized_ = stage * realized_;
    ideal_ = ideal_.then(ideal);
    now_ += duration;
  }

  const ProtocolSetup& setup_;
  const spin::SpinPairParams& params_;
  int n_;
  int data_;
  control::ShiftSpec noise_;
  IdealReference reference_;
  double now_ = 0.0;
  Eigen::MatrixXcd realized_;
  gates::FlippedDiagonal ideal_;
  std::vector<double> pulses_;
  double leakage_ = 0.0;
};

void double_cycle_on(Timeline& timeline, const ProtocolOptions& options, int ancilla) {
  timeline.park(ancilla, options.pre_idle_ns);
  timeline.cycle(ancilla, true);
  timeline.flip(ancilla);
  timeline.park(ancilla, options.pre_idle_ns);
  timeline.cycle(ancilla, false);
}

}  // namespace

double simulated_dwell_phase(const spin::SpinPairParams& params, const control::ShuttleSchedule& ramps,
                             double tau) {
  const auto with = dynamics::adiabatic_cycle(params, ramps.with_dwell(tau));
  const auto without = dynamics::adiabatic_cycle(params, ramps.with_dwell(0.0));
  return gates::wrap_phase(total_conditional_phase(with.params) - total_conditional_phase(without.params));
}

double calibrate_tau(const spin::SpinPairParams& params, const control::ShuttleSchedule& ramps,
                     CalibrationMode mode) {
  const double rate = spin::cz_rate(params, params.hyperfine.at(ramps.e_rop()));
  if (!(std::abs(rate) > 1e-12)) {
    throw NumericalError("conditional phase rate vanishes at the operating point; cannot calibrate tau");
  }
  const double tau0 = kPi / std::abs(rate);
  if (mode == CalibrationMode::PureDwell) return tau0;

  const auto without = dynamics::adiabatic_cycle(params, ramps.with_dwell(0.0));
  auto residual = [&](double tau) {
    const auto with = dynamics::adiabatic_cycle(params, ramps.with_dwell(tau));
    const double f = total_conditional_phase(with.params) - total_conditional_phase(without.params);
    return gates::wrap_phase(f - kPi);
  };
  const double tau1 = tau0 * (1.0 + 1e-3);
  const double r0 = residual(tau0);
  const double r1 = residual(tau1);
  if (r1 == r0) throw NumericalError("tau calibration secant step is singular");
  const double tau = tau1 - r1 * (tau1 - tau0) / (r1 - r0);
  if (!(tau > 0.0) || std::abs(residual(tau)) > kCalibrationTolerance) {
    throw NumericalError("tau calibration did not reach f(tau) = pi within " + format_double(kCalibrationTolerance));
  }
  return tau;
}

void ProtocolOptions::validate() const {
  if (!std::isfinite(pre_idle_ns) || pre_idle_ns < 0.0) throw ValidationError("pre-idle time must be non-negative");
  if (!std::isfinite(travel_idle_ns) || travel_idle_ns < 0.0) {
    throw ValidationError("travel idle time must be non-negative");
  }
}

ProtocolSetup::ProtocolSetup(spin::SpinPairParams params, control::ShuttleSchedule schedule, ProtocolOptions options)
    : params_(std::move(params)),
      schedule_(std::move(schedule)),
      schedule_no_dwell_(schedule_.with_dwell(0.0)),
      options_(options) {
  params_.validate();
  options_.validate();
  cycles_.with_dwell = dynamics::adiabatic_cycle(params_, schedule_).params;
  cycles_.without_dwell = dynamics::adiabatic_cycle(params_, schedule_no_dwell_).params;
}

double ProtocolSetup::double_cycle_duration() const {
  return 2.0 * options_.pre_idle_ns + schedule_.duration() + schedule_no_dwell_.duration();
}

double ProtocolSetup::composite_duration() const {
  return 2.0 * double_cycle_duration() + options_.travel_idle_ns;
}

std::vector<double> ProtocolSetup::double_cycle_refocus_times() const {
  return {options_.pre_idle_ns + schedule_.duration()};
}

std::vector<double> ProtocolSetup::composite_refocus_times() const {
  const double dc = double_cycle_duration();
  const double first = options_.pre_idle_ns + schedule_.duration();
  return {first, dc, dc + options_.travel_idle_ns + first};
}

ProtocolRun double_cycle_run(const ProtocolSetup& setup, const control::ShiftSpec& noise, IdealReference reference) {
  noise.validate(setup.double_cycle_duration());
  Timeline timeline(setup, 2, noise, reference);
  double_cycle_on(timeline, setup.options(), 0);
  return std::move(timeline).finish();
}

ProtocolRun composite_run(const ProtocolSetup& setup, const control::ShiftSpec& noise, IdealReference reference) {
  noise.validate(setup.composite_duration());
  Timeline timeline(setup, 3, noise, reference);
  double_cycle_on(timeline, setup.options(), 0);
  timeline.flip(2);
  timeline.idle_all(setup.options().travel_idle_ns);
  double_cycle_on(timeline, setup.options(), 1);
  return std::move(timeline).finish();
}

ProtocolRun double_cycle_run(const spin::SpinPairParams& params, const control::ShuttleSchedule& schedule,
                             double tau, const control::ShiftSpec& noise, const ProtocolOptions& options) {
  return double_cycle_run(ProtocolSetup(params, schedule.with_dwell(tau), options), noise);
}

ProtocolRun composite_run(const spin::SpinPairParams& params, const control::ShuttleSchedule& schedule,
                          double tau, const control::ShiftSpec& noise, const ProtocolOptions& options) {
  return composite_run(ProtocolSetup(params, schedule.with_dwell(tau), options), noise);
}

}  // namespace donorgate::protocol

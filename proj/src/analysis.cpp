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

#include "donorgate/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "donorgate/dynamics.hpp"
#include "donorgate/errors.hpp"
#include "donorgate/format.hpp"

namespace donorgate::analysis {

namespace {

int qubits_for_dimension(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) throw ValidationError("unitary dimension must be a power of two");
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

double sign_of(std::uint32_t mask, std::size_t x) {
  return (std::popcount(mask & static_cast<std::uint32_t>(x)) & 1) ? -1.0 : 1.0;
}

// Slot-wise maximum of two reports of the same shape.
void absorb_max(ChannelReport& into, const ChannelReport& other) {
  into.leakage = std::max(into.leakage, other.leakage);
  for (std::size_t k = 0; k < into.channels.size(); ++k) {
    if (other.channels[k].worst_case > into.channels[k].worst_case ||
        (other.channels[k].worst_case == into.channels[k].worst_case &&
         std::abs(other.channels[k].delta) > std::abs(into.channels[k].delta))) {
      into.channels[k] = other.channels[k];
    }
  }
}

}  // namespace

const PhaseChannel& ChannelReport::channel(const std::string& label) const {
  for (const auto& c : channels) {
    if (c.label == label) return c;
  }
  throw ValidationError("no channel " + label);
}

double ChannelReport::max_phase_probability() const {
  double m = 0.0;
  for (const auto& c : channels) m = std::max(m, c.worst_case);
  return m;
}

std::string channel_label(int num_qubits, std::uint32_t mask) {
  std::string label(static_cast<std::size_t>(num_qubits), 'I');
  for (int q = 0; q < num_qubits; ++q) {
    if (mask & gates::qubit_bit(num_qubits, q)) label[static_cast<std::size_t>(q)] = 'Z';
  }
  return label;
}

double worst_case_probability(double delta) {
  const double s = std::sin(0.5 * delta);
  return s * s;
}

std::vector<double> walsh_forward(std::span<const double> phases) {
  const std::size_t n = phases.size();
  if (n == 0 || (n & (n - 1)) != 0) throw ValidationError("phase vector length must be a power of two");
  std::vector<double> out(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    double acc = 0.0;
    for (std::size_t x = 0; x < n; ++x) acc += sign_of(static_cast<std::uint32_t>(s), x) * phases[x];
    out[s] = (s == 0) ? acc / static_cast<double>(n) : -2.0 * acc / static_cast<double>(n);
  }
  return out;
}

std::vector<double> walsh_inverse(std::span<const double> coefficients) {
  const std::size_t n = coefficients.size();
  if (n == 0 || (n & (n - 1)) != 0) throw ValidationError("coefficient vector length must be a power of two");
  std::vector<double> out(n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    double acc = coefficients[0];
    for (std::size_t s = 1; s < n; ++s) acc -= 0.5 * coefficients[s] * sign_of(static_cast<std::uint32_t>(s), x);
    out[x] = acc;
  }
  return out;
}

ChannelReport channel_decompose(const Eigen::MatrixXcd& realized, const Eigen::MatrixXcd& ideal) {
  if (realized.rows() != realized.cols() || ideal.rows() != ideal.cols() || realized.rows() != ideal.rows()) {
    throw ValidationError("realized and ideal unitaries must be square and of equal dimension");
  }
  const int n = qubits_for_dimension(realized.rows());
  const Eigen::MatrixXcd d = realized * ideal.adjoint();
  const auto dim = static_cast<std::size_t>(d.rows());

  ChannelReport report;
  report.num_qubits = n;
  std::vector<double> phases(dim, 0.0);
  const double ref = std::arg(d(0, 0));
  for (std::size_t k = 0; k < dim; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    double off = 0.0;
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (j != kk) off += std::norm(d(kk, j));
    }
    report.leakage = std::max(report.leakage, off);
    phases[k] = gates::wrap_phase(std::arg(d(kk, kk)) - ref);
  }
  report.leakage = std::min(report.leakage, 1.0);

  const std::vector<double> coefficients = walsh_forward(phases);
  for (std::size_t s = 1; s < dim; ++s) {
    const auto mask = static_cast<std::uint32_t>(s);
    report.channels.push_back(
        {mask, channel_label(n, mask), coefficients[s], worst_case_probability(coefficients[s])});
  }
  return report;
}

ChannelReport channel_decompose(const protocol::ProtocolRun& run) { return channel_decompose(run.realized, run.ideal); }

gates::DiagonalGate reconstruct_diagonal(const ChannelReport& report) {
  std::vector<double> coefficients(std::size_t{1} << report.num_qubits, 0.0);
  for (const auto& c : report.channels) coefficients.at(c.mask) = c.delta;
  return gates::canonicalize(gates::DiagonalGate(report.num_qubits, walsh_inverse(coefficients)));
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs < 1) throw ValidationError("jobs must be at least 1");
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ShuttleSweep sweep_shuttle(const spin::SpinPairParams& params, const control::ShuttleSchedule& schedule_template,
                           std::span<const double> shuttle_times, int jobs, double threshold) {
  if (shuttle_times.empty()) throw ValidationError("shuttle sweep needs at least one time");
  for (double t : shuttle_times) {
    if (!std::isfinite(t) || t <= 0.0) throw ValidationError("shuttle times must be positive");
  }
  params.validate();
  ShuttleSweep sweep;
  sweep.threshold = threshold;
  sweep.rows.resize(shuttle_times.size());
  const spin::Matrix4cd basis =
      spin::eigenbasis(params, params.hyperfine.at(schedule_template.e_start()));
  parallel_for(shuttle_times.size(), jobs, [&](std::size_t i) {
    const double t = shuttle_times[i];
    const double steps = std::max(1.0, std::ceil(t / schedule_template.dt() - 1e-9));
    const control::ShuttleSchedule schedule(schedule_template.e_start(), schedule_template.e_rop(), t,
                                            schedule_template.dwell_time(), t / steps);
    const dynamics::Propagation p = dynamics::propagate(params, schedule);
    sweep.rows[i] = {t, dynamics::flip_flop_probability(p, basis)};
  });
  for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
    if (i > 0 && sweep.rows[i].probability > sweep.rows[i - 1].probability + kProbabilityFloor) {
      sweep.non_increasing = false;
    }
    if (!sweep.first_below_threshold && sweep.rows[i].probability < threshold) {
      sweep.first_below_threshold = sweep.rows[i].shuttle_time;
    }
  }
  return sweep;
}

ChannelReport composite_shift_report(const protocol::ProtocolSetup& setup, control::ShiftSpec::Kind kind,
                                     double delta_e, protocol::IdealReference reference) {
  if (kind == control::ShiftSpec::Kind::Static) {
    return channel_decompose(protocol::composite_run(setup, control::ShiftSpec::static_shift(delta_e), reference));
  }
  std::optional<ChannelReport> worst;
  for (double flip : setup.composite_refocus_times()) {
    const ChannelReport r =
        channel_decompose(protocol::composite_run(setup, control::ShiftSpec::alternating(delta_e, flip), reference));
    if (!worst) {
      worst = r;
    } else {
      absorb_max(*worst, r);
    }
  }
  return *worst;
}

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y, double x_min, double x_max) {
  if (x.size() != y.size()) throw ValidationError("slope fit needs matching x and y");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= x_min && x[i] <= x_max && x[i] > 0.0 && y[i] > 0.0)) continue;
    const double lx = std::log10(x[i]);
    const double ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  SlopeFit fit;
  fit.points = n;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n >= 2 && denom > 0.0) ? (n * sxy - sx * sy) / denom : std::numeric_limits<double>::quiet_NaN();
  return fit;
}

ShiftSweep sweep_shift(const protocol::ProtocolSetup& setup, const ShiftSweepOptions& options) {
  if (options.deltas.empty()) throw ValidationError("shift sweep needs at least one delta_E");
  if (options.kinds.empty()) throw ValidationError("shift sweep needs at least one shift kind");
  for (double d : options.deltas) {
    if (!std::isfinite(d)) throw ValidationError("delta_E values must be finite");
  }
  if (std::find(options.deltas.begin(), options.deltas.end(), 0.0) == options.deltas.end()) {
    throw ValidationError("shift sweep deltas must include 0 for the baseline");
  }
  const std::size_t nd = options.deltas.size();
  const std::size_t count = options.kinds.size() * nd;
  std::vector<ChannelReport> reports(count);
  parallel_for(count, options.jobs, [&](std::size_t i) {
    reports[i] = composite_shift_report(setup, options.kinds[i / nd], options.deltas[i % nd], options.reference);
  });

  ShiftSweep sweep;
  for (std::size_t i = 0; i < count; ++i) {
    const auto kind = options.kinds[i / nd];
    const double delta_e = options.deltas[i % nd];
    sweep.rows.push_back({kind, delta_e, "leakage", std::nullopt, reports[i].leakage});
    for (const auto& c : reports[i].channels) sweep.rows.push_back({kind, delta_e, c.label, c.delta, c.worst_case});
  }

  for (std::size_t k = 0; k < options.kinds.size(); ++k) {
    const auto kind = options.kinds[k];
    const auto& first = reports[k * nd];
    std::vector<double> ys(nd);
    for (std::size_t c = 0; c < first.channels.size(); ++c) {
      for (std::size_t j = 0; j < nd; ++j) ys[j] = reports[k * nd + j].channels[c].worst_case;
      SlopeFit fit = fit_loglog(options.deltas, ys, options.fit_min, options.fit_max);
      fit.kind = kind;
      fit.channel = first.channels[c].label;
      sweep.slopes.push_back(fit);
    }
    for (std::size_t j = 0; j < nd; ++j) ys[j] = reports[k * nd + j].max_phase_probability();
    SlopeFit fit = fit_loglog(options.deltas, ys, options.fit_min, options.fit_max);
    fit.kind = kind;
    fit.channel = "max";
    sweep.slopes.push_back(fit);
  }
  return sweep;
}

double drift_to_field(double delta_mv, double lever_arm_mv_per_m_per_mv, double t_target, double t_reference) {
  if (!(t_target > 0.0) || !(t_reference > 0.0) || !std::isfinite(t_target) || !std::isfinite(t_reference)) {
    throw ValidationError("drift times must be positive");
  }
  if (!std::isfinite(delta_mv) || !std::isfinite(lever_arm_mv_per_m_per_mv)) {
    throw ValidationError("drift magnitude and lever arm must be finite");
  }
  const double field = delta_mv * lever_arm_mv_per_m_per_mv;
  if (t_target == t_reference) return field;
  return field * std::sqrt(t_target / t_reference);
}

namespace {

void write_header(std::ostream& out, std::span<const std::string> header) {
  for (const auto& line : header) out << "# " << line << '\n';
}

}  // namespace

void write_shuttle_csv(std::ostream& out, const ShuttleSweep& sweep, std::span<const std::string> header) {
  write_header(out, header);
  out << "shuttle_time_ns,flip_flop_probability\n";
  for (const auto& row : sweep.rows) out << format_double(row.shuttle_time) << ',' << format_double(row.probability) << '\n';
}

void write_shift_csv(std::ostream& out, const ShiftSweep& sweep, std::span<const std::string> header) {
  write_header(out, header);
  out << "kind,delta_E_MV_per_m,channel,delta_rad,worst_case_probability\n";
  for (const auto& row : sweep.rows) {
    out << control::to_string(row.kind) << ',' << format_double(row.delta_e) << ',' << row.channel << ',';
    if (row.delta_rad) out << format_double(*row.delta_rad);
    out << ',' << format_double(row.worst_case_probability) << '\n';
  }
}

}  // namespace donorgate::analysis

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

#include "donorgate/spin_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "donorgate/errors.hpp"

namespace donorgate::spin {

namespace {

constexpr double kPi = std::numbers::pi;

// Quintic smootherstep on [0, 1], clamped outside.
double smootherstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

double analytic_at(const AnalyticHyperfine& m, double e) {
  const double d = e - m.e_rop;
  const double quad = std::max(0.0, 1.0 - m.kappa * d * d);
  const double cutoff = std::max(0.0, 1.0 - smootherstep((e - m.e_knee) / m.knee_width));
  return m.a_max_mhz * quad * cutoff;
}

double parse_number(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto* begin = field.data();
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw ValidationError("hyperfine table line " + std::to_string(line) + ": cannot parse '" +
                          std::string(field) + "' as a number");
  }
  return value;
}

}  // namespace

double mhz_to_rad_per_ns(double mhz) { return 2.0 * kPi * mhz * 1e-3; }

Constants Constants::defaults() {
  constexpr double kBohrMagneton = 9.2740100783e-24;  // J/T
  constexpr double kHbar = 1.054571817e-34;           // J s
  constexpr double kElectronG = 2.0;
  // 31P nuclear gyromagnetic ratio, 10.8394e7 rad/(s T) (NMR tables).
  constexpr double kPhosphorusGyro = 10.8394e7;
  return {kElectronG * kBohrMagneton / kHbar * kGyroSiToInternal,
          kPhosphorusGyro * kGyroSiToInternal, 1.25663706212e-6, kHbar};
}

double dipolar_max_strength(const DipolarPair& pair, const Constants& constants) {
  if (!(pair.r_nm > 0.0) || !std::isfinite(pair.r_nm)) {
    throw ValidationError("dipolar separation must be positive");
  }
  const double g1 = pair.gyro_1 / kGyroSiToInternal;
  const double g2 = pair.gyro_2 / kGyroSiToInternal;
  const double r = pair.r_nm * 1e-9;
  const double energy = constants.mu0 * g1 * g2 * constants.hbar * constants.hbar /
                        (4.0 * kPi * r * r * r);
  // |1 - 3 cos^2 theta| peaks at 2 along the separation axis.
  constexpr double kAngularFactor = 2.0;
  return std::abs(kAngularFactor * energy / (2.0 * kPi * constants.hbar));
}

void AnalyticHyperfine::validate() const {
  for (double v : {a_max_mhz, e_rop, kappa, e_knee, knee_width, e_min, e_max, donor_depth_a0}) {
    if (!std::isfinite(v)) throw ValidationError("analytic hyperfine parameters must be finite");
  }
  if (a_max_mhz < 0.0) throw ValidationError("A_max must be non-negative");
  if (kappa <= 0.0) throw ValidationError("kappa must be positive");
  if (knee_width <= 0.0) throw ValidationError("knee width must be positive");
  if (e_knee <= e_rop) throw ValidationError("ionization knee must lie above the operating point");
  if (!(e_min < e_rop && e_rop < e_max)) {
    throw ValidationError("operating point must lie inside the field domain");
  }
}

HyperfineTable::HyperfineTable(std::vector<double> fields, std::vector<double> couplings_mhz)
    : fields_(std::move(fields)), couplings_(std::move(couplings_mhz)) {
  const std::size_t n = fields_.size();
  if (n < 2 || couplings_.size() != n) {
    throw ValidationError("hyperfine table needs at least two (E, A) rows");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(fields_[k]) || !std::isfinite(couplings_[k])) {
      throw ValidationError("hyperfine table values must be finite");
    }
    if (couplings_[k] < 0.0) throw ValidationError("hyperfine table couplings must be non-negative");
    if (k > 0 && !(fields_[k] > fields_[k - 1])) {
      throw ValidationError("hyperfine table fields must be strictly increasing");
    }
  }
  const double peak = *std::max_element(couplings_.begin(), couplings_.end());
  if (std::count(couplings_.begin(), couplings_.end(), peak) != 1) {
    throw ValidationError("hyperfine table maximum must be unique");
  }

  // Fritsch-Butland slopes with the three-point, shape-preserving end rule.
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = fields_[k + 1] - fields_[k];
    delta[k] = (couplings_[k + 1] - couplings_[k]) / h[k];
  }
  slopes_.assign(n, 0.0);
  if (n == 2) {
    slopes_[0] = slopes_[1] = delta[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slopes_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) s = 3.0 * d0;
    return s;
  };
  slopes_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  slopes_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double HyperfineTable::at(double e) const {
  if (!(e >= fields_.front() && e <= fields_.back())) {
    throw ValidationError("field " + std::to_string(e) + " MV/m outside hyperfine table domain [" +
                          std::to_string(fields_.front()) + ", " + std::to_string(fields_.back()) + "]");
  }
  auto it = std::upper_bound(fields_.begin(), fields_.end(), e);
  std::size_t k = (it == fields_.end()) ? fields_.size() - 2
                                        : static_cast<std::size_t>(it - fields_.begin()) - 1;
  const double h = fields_[k + 1] - fields_[k];
  const double t = (e - fields_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * couplings_[k] + h10 * h * slopes_[k] + h01 * couplings_[k + 1] +
         h11 * h * slopes_[k + 1];
}

HyperfineTable read_hyperfine_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("hyperfine table is empty");
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "E_MV_per_m,A_MHz") {
    throw ValidationError("hyperfine table header must be exactly 'E_MV_per_m,A_MHz'");
  }
  std::vector<double> fields, couplings;
  std::size_t line_no = 1;
  bool saw_blank = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      saw_blank = true;
      continue;
    }
    if (saw_blank) throw ValidationError("hyperfine table has a blank line before row " + std::to_string(line_no));
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw ValidationError("hyperfine table line " + std::to_string(line_no) + " must have two fields");
    }
    const std::string_view view(line);
    fields.push_back(parse_number(view.substr(0, comma), line_no));
    couplings.push_back(parse_number(view.substr(comma + 1), line_no));
  }
  return HyperfineTable(std::move(fields), std::move(couplings));
}

HyperfineTable read_hyperfine_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open hyperfine table '" + path + "'");
  return read_hyperfine_table(in);
}

HyperfineModel::HyperfineModel(AnalyticHyperfine analytic) : model_(analytic) { analytic.validate(); }

HyperfineModel::HyperfineModel(HyperfineTable table) : model_(std::move(table)) {}

double HyperfineModel::at(double e) const {
  if (const auto* m = std::get_if<AnalyticHyperfine>(&model_)) {
    if (!(e >= m->e_min && e <= m->e_max)) {
      throw ValidationError("field " + std::to_string(e) + " MV/m outside hyperfine model domain [" +
                            std::to_string(m->e_min) + ", " + std::to_string(m->e_max) + "]");
    }
    return analytic_at(*m, e);
  }
  return std::get<HyperfineTable>(model_).at(e);
}

std::pair<double, double> HyperfineModel::domain() const {
  if (const auto* m = std::get_if<AnalyticHyperfine>(&model_)) return {m->e_min, m->e_max};
  const auto& t = std::get<HyperfineTable>(model_);
  return {t.fields().front(), t.fields().back()};
}

double HyperfineModel::rop_field() const {
  if (const auto* m = std::get_if<AnalyticHyperfine>(&model_)) return m->e_rop;
  const auto& t = std::get<HyperfineTable>(model_);
  const auto peak = std::max_element(t.couplings().begin(), t.couplings().end());
  return t.fields()[static_cast<std::size_t>(peak - t.couplings().begin())];
}

double HyperfineModel::max_coupling_mhz() const {
  if (const auto* m = std::get_if<AnalyticHyperfine>(&model_)) return m->a_max_mhz;
  const auto& t = std::get<HyperfineTable>(model_);
  return *std::max_element(t.couplings().begin(), t.couplings().end());
}

double hyperfine_at(const HyperfineModel& model, double e) { return model.at(e); }

void SpinPairParams::validate() const {
  if (!std::isfinite(b_mt) || b_mt < 0.0) throw ValidationError("B field must be finite and non-negative");
}

Matrix4cd hamiltonian(const SpinPairParams& params, double a_mhz) {
  if (!std::isfinite(a_mhz) || a_mhz < 0.0) throw ValidationError("hyperfine coupling must be non-negative");
  const double b = params.b_mt;
  const double gs = params.constants.gyro_electron;
  const double gp = params.constants.gyro_phosphorus;
  const double a = mhz_to_rad_per_ns(a_mhz);

  Matrix4cd h = Matrix4cd::Zero();
  // (S^z, I^z) for each basis state
  constexpr double sz[4] = {0.5, 0.5, -0.5, -0.5};
  constexpr double iz[4] = {0.5, -0.5, 0.5, -0.5};
  for (int k = 0; k < 4; ++k) h(k, k) = b * (gs * sz[k] - gp * iz[k]) + a * sz[k] * iz[k];
  // (S+ I- + S- I+) / 2 couples up-Down and down-Up
  h(1, 2) = h(2, 1) = 0.5 * a;
  return h;
}

Eigensystem eigensystem(const SpinPairParams& params, double a_mhz) {
  const double b = params.b_mt;
  const double gs = params.constants.gyro_electron;
  const double gp = params.constants.gyro_phosphorus;
  const double a = mhz_to_rad_per_ns(a_mhz);
  if (!std::isfinite(a_mhz) || a_mhz < 0.0) throw ValidationError("hyperfine coupling must be non-negative");

  const double split = b * (gs + gp);  // up-Down minus down-Up at A = 0
  if (split == 0.0 && a == 0.0) {
    throw NumericalError("flip-flop block is degenerate (B = 0 and A = 0)");
  }
  const double half_gap = 0.5 * std::hypot(split, a);
  const double block_mean = -0.25 * a;

  Eigensystem out{};
  out.energies[0] = 0.5 * b * (gs - gp) + 0.25 * a;
  out.energies[3] = -0.5 * b * (gs - gp) + 0.25 * a;
  out.energies[1] = block_mean + half_gap;
  out.energies[2] = block_mean - half_gap;
  out.flip_flop_gap = 2.0 * half_gap;
  out.mixing_angle = 0.5 * std::atan2(a, split);
  return out;
}

Matrix4cd eigenbasis(const SpinPairParams& params, double a_mhz) {
  const Eigensystem sys = eigensystem(params, a_mhz);
  const double c = std::cos(sys.mixing_angle);
  const double s = std::sin(sys.mixing_angle);
  Matrix4cd v = Matrix4cd::Zero();
  v(0, 0) = 1.0;
  v(3, 3) = 1.0;
  v(1, 1) = c;
  v(2, 1) = s;
  v(1, 2) = -s;
  v(2, 2) = c;
  return v;
}

double cz_rate(const SpinPairParams& params, double a_mhz) {
  const Eigensystem sys = eigensystem(params, a_mhz);
  return sys.energies[0] - sys.energies[1] - sys.energies[2] + sys.energies[3];
}

}  // namespace donorgate::spin

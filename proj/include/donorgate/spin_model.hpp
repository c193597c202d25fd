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
#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace donorgate::spin {

// Internal units: time in ns, angular frequency in rad/ns, magnetic field in
// mT, electric field in MV/m, hyperfine coupling in MHz (ordinary frequency).
// A gyromagnetic ratio of 1 rad/(s T) is 1e-12 rad/(ns mT).
inline constexpr double kGyroSiToInternal = 1e-12;

// A [MHz] -> angular frequency [rad/ns].
double mhz_to_rad_per_ns(double mhz);

struct Constants {
  double gyro_electron;    // rad/(ns mT), g mu_B / hbar with g = 2
  double gyro_phosphorus;  // rad/(ns mT), 31P
  double mu0;              // T m / A (SI)
  double hbar;             // J s (SI)

  static Constants defaults();
};

// ---------------------------------------------------------------------------
// Dipolar coupling between two isolated spins
// ---------------------------------------------------------------------------

struct DipolarPair {
  double gyro_1;  // rad/(ns mT)
  double gyro_2;  // rad/(ns mT)
  double r_nm;
};

// Largest coupling over orientations of the point-dipole Hamiltonian,
// mu0 g1 g2 hbar^2 / (4 pi r^3) times the extremal angular factor 2,
// expressed as an ordinary frequency in Hz.
double dipolar_max_strength(const DipolarPair& pair, const Constants& constants = Constants::defaults());

// ---------------------------------------------------------------------------
// Hyperfine coupling as a function of the applied electric field
// ---------------------------------------------------------------------------

// Synthetic stand-in for a computed A(E) curve: a quadratic Stark maximum at
// e_rop, cut off smoothly (quintic blend, C2) over [e_knee, e_knee + knee_width]
// where the electron is pulled off the donor.
//   A(E) = a_max * max(0, 1 - kappa (E - e_rop)^2) * (1 - s((E - e_knee) / knee_width))
struct AnalyticHyperfine {
  double a_max_mhz = 117.0;
  double e_rop = 1.0;           // MV/m
  double kappa = 0.01;          // m^2/MV^2
  double e_knee = 3.0;          // MV/m
  double knee_width = 8.0;      // MV/m
  double e_min = -20.0;         // MV/m, domain
  double e_max = 40.0;          // MV/m, domain
  double donor_depth_a0 = 13.0; // metadata only; a0 ~ 0.54 nm

  void validate() const;
};

// Knot table interpolated with a shape-preserving piecewise cubic (PCHIP), so
// the interpolant never overshoots the data and peaks only at a knot.
class HyperfineTable {
 public:
  HyperfineTable(std::vector<double> fields, std::vector<double> couplings_mhz);

  std::span<const double> fields() const { return fields_; }
  std::span<const double> couplings() const { return couplings_; }
  double at(double e) const;

 private:
  std::vector<double> fields_;
  std::vector<double> couplings_;
  std::vector<double> slopes_;
};

// Reads the `E_MV_per_m,A_MHz` CSV format.
HyperfineTable read_hyperfine_table(std::istream& in);
HyperfineTable read_hyperfine_table_file(const std::string& path);

class HyperfineModel {
 public:
  explicit HyperfineModel(AnalyticHyperfine analytic);
  explicit HyperfineModel(HyperfineTable table);

  // A(E) in MHz; throws ValidationError outside the domain.
  double at(double e) const;
  std::pair<double, double> domain() const;
  // Field of the maximum (the operating point) and the maximum itself.
  double rop_field() const;
  double max_coupling_mhz() const;

  bool is_table() const { return std::holds_alternative<HyperfineTable>(model_); }
  const std::variant<AnalyticHyperfine, HyperfineTable>& model() const { return model_; }

 private:
  std::variant<AnalyticHyperfine, HyperfineTable> model_;
};

double hyperfine_at(const HyperfineModel& model, double e);

// ---------------------------------------------------------------------------
// Electron-nuclear pair
// ---------------------------------------------------------------------------

struct SpinPairParams {
  double b_mt = 100.0;
  HyperfineModel hyperfine{AnalyticHyperfine{}};
  Constants constants = Constants::defaults();

  void validate() const;
};

using Matrix4cd = Eigen::Matrix<std::complex<double>, 4, 4>;

// Basis order |electron nucleus>: 0 = up-Up, 1 = up-Down, 2 = down-Up,
// 3 = down-Down. As qubits the electron is qubit 0 and "up" is |0>.
// H = B (g_S S^z - g_P I^z) + A S.I  in rad/ns.
Matrix4cd hamiltonian(const SpinPairParams& params, double a_mhz);

struct Eigensystem {
  std::array<double, 4> energies;  // rad/ns, labelled by the A = 0 basis state
  double flip_flop_gap;            // splitting of the {up-Down, down-Up} block
  double mixing_angle;             // tan(2 theta) = A / ((g_S + g_P) B)
};

Eigensystem eigensystem(const SpinPairParams& params, double a_mhz);

// Columns are the eigenvectors, in the same labelling as Eigensystem::energies.
Matrix4cd eigenbasis(const SpinPairParams& params, double a_mhz);

// E(up-Up) - E(up-Down) - E(down-Up) + E(down-Down): the rate at which the
// conditional phase accumulates at fixed control.
double cz_rate(const SpinPairParams& params, double a_mhz);

}  // namespace donorgate::spin

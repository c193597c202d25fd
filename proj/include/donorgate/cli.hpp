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
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "donorgate/spin_model.hpp"

namespace donorgate::cli {

inline constexpr const char* kVersion = "0.1.0";

// Flat run configuration. Every key is optional; unknown keys are rejected.
struct RunConfig {
  double b_mt = 100.0;

  // Hyperfine model: a table CSV when set, else the analytic stand-in.
  std::string hyperfine_table;
  spin::AnalyticHyperfine analytic;

  double e_start = 12.0;  // MV/m
  double ramp_time_ns = 2.0;
  double dt_ns = 1.25e-4;
  std::optional<double> tau_ns;              // empty: calibrate
  std::string calibration = "simulated";     // or "pure_dwell"
  double pre_idle_ns = 0.0;
  double travel_idle_ns = 0.0;

  std::vector<double> shuttle_times_ns = {0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  double shuttle_threshold = 1e-4;

  std::vector<double> shift_deltas = {0.0, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1};  // MV/m
  std::vector<std::string> shift_kinds = {"static", "alternating"};
  double fit_min = 1e-3;
  double fit_max = 1e-1;
  std::string ideal_reference = "noiseless";  // or "dwell_adjusted"

  std::uint64_t seed = 42;
  int trials = 10000;
  int random_states = 20;
  bool corrupt_convention = false;  // negative-control hook for the identity suites

  double dipolar_r_nm = 1.0;

  // Checks values that need no computation.
  void validate() const;
};

RunConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

// Reads a JSON config, or the `# config:` echo line of a CSV written by this
// tool.
RunConfig load_config_file(const std::string& path);

// Runs the command line (argv[0] is the program name) and returns the exit
// status: 0 ok, 1 configuration or validation error, 2 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace donorgate::cli

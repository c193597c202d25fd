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

#include "donorgate/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "donorgate/analysis.hpp"
#include "donorgate/control.hpp"
#include "donorgate/errors.hpp"
#include "donorgate/format.hpp"
#include "donorgate/identities.hpp"
#include "donorgate/protocol.hpp"

namespace donorgate::cli {

namespace {

using nlohmann::json;

constexpr const char* kAnalyticKeys[] = {"a_max_mhz", "e_rop", "kappa", "e_knee", "knee_width",
                                         "e_min",     "e_max", "donor_depth_a0"};

double get_number(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ValidationError("config key '" + key + "' must be a number");
  return v.get<double>();
}

template <class Int>
Int get_integer(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError("config key '" + key + "' must be an integer");
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
      throw ValidationError("config key '" + key + "' is out of range");
    }
    return static_cast<Int>(u);
  }
  const auto s = v.get<std::int64_t>();
  if (s < 0 && std::is_unsigned_v<Int>) throw ValidationError("config key '" + key + "' must be non-negative");
  if (s > static_cast<std::int64_t>(std::numeric_limits<Int>::max()) ||
      (std::is_signed_v<Int> && s < static_cast<std::int64_t>(std::numeric_limits<Int>::min()))) {
    throw ValidationError("config key '" + key + "' is out of range");
  }
  return static_cast<Int>(s);
}

std::string get_string(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ValidationError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_array()) throw ValidationError("config key '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ValidationError("config key '" + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::string> get_strings(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_array()) throw ValidationError("config key '" + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) throw ValidationError("config key '" + key + "' must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}

spin::HyperfineModel build_model(const RunConfig& c) {
  if (!c.hyperfine_table.empty()) return spin::HyperfineModel(spin::read_hyperfine_table_file(c.hyperfine_table));
  c.analytic.validate();
  return spin::HyperfineModel(c.analytic);
}

control::ShiftSpec::Kind parse_kind(const std::string& s) {
  if (s == "static") return control::ShiftSpec::Kind::Static;
  if (s == "alternating") return control::ShiftSpec::Kind::Alternating;
  throw ValidationError("unknown shift kind '" + s + "' (expected static or alternating)");
}

protocol::CalibrationMode parse_calibration(const std::string& s) {
  if (s == "simulated") return protocol::CalibrationMode::Simulated;
  if (s == "pure_dwell") return protocol::CalibrationMode::PureDwell;
  throw ValidationError("unknown calibration '" + s + "' (expected simulated or pure_dwell)");
}

protocol::IdealReference parse_reference(const std::string& s) {
  if (s == "noiseless") return protocol::IdealReference::Noiseless;
  if (s == "dwell_adjusted") return protocol::IdealReference::DwellAdjusted;
  throw ValidationError("unknown ideal_reference '" + s + "' (expected noiseless or dwell_adjusted)");
}

// Everything the simulation commands need, built before any computation.
struct Context {
  RunConfig config;
  spin::SpinPairParams params;
  control::ShuttleSchedule ramps;  // dwell time 0
  protocol::ProtocolOptions options;
  protocol::CalibrationMode calibration;

  static Context build(const RunConfig& c) {
    c.validate();
    spin::SpinPairParams params{c.b_mt, build_model(c), spin::Constants::defaults()};
    params.validate();
    const double e_rop = params.hyperfine.rop_field();
    params.hyperfine.at(c.e_start);  // domain check
    control::ShuttleSchedule ramps(c.e_start, e_rop, c.ramp_time_ns, 0.0, c.dt_ns);
    protocol::ProtocolOptions options{c.pre_idle_ns, c.travel_idle_ns};
    options.validate();
    if (c.tau_ns) (void)ramps.with_dwell(*c.tau_ns);  // rejects an unusable override early
    return Context{c, std::move(params), std::move(ramps), options, parse_calibration(c.calibration)};
  }

  double tau() const {
    return config.tau_ns ? *config.tau_ns : protocol::calibrate_tau(params, ramps, calibration);
  }
};

std::vector<std::string> header_lines(const std::string& command, const RunConfig& config) {
  return {std::string("donorgate ") + kVersion + " " + command, "config: " + to_json(config).dump()};
}

// CSV goes to --out when given, otherwise to `out`; the summary then goes to
// `err` so the CSV stays clean.
struct Sinks {
  std::ostream* csv;
  std::ostream* summary;
  std::ofstream file;
};

void open_sinks(Sinks& s, const std::string& path, std::ostream& out, std::ostream& err) {
  if (path.empty()) {
    s.csv = &out;
    s.summary = &err;
    return;
  }
  s.file.open(path, std::ios::binary);
  if (!s.file) throw ValidationError("cannot open output file '" + path + "'");
  s.csv = &s.file;
  s.summary = &out;
}

int report_identities(const std::vector<verify::IdentityResult>& results, const std::string& command,
                      const RunConfig& config, Sinks& sinks) {
  for (const auto& line : header_lines(command, config)) *sinks.csv << "# " << line << '\n';
  *sinks.csv << "identity,max_error,tolerance,cases,passed\n";
  for (const auto& r : results) {
    *sinks.csv << r.name << ',' << format_double(r.max_error) << ',' << format_double(r.tolerance) << ',' << r.cases
               << ',' << (r.passed() ? "true" : "false") << '\n';
    *sinks.summary << (r.passed() ? "PASS " : "FAIL ") << r.name << ": max error " << format_double(r.max_error)
                   << " (tolerance " << format_double(r.tolerance) << ", " << r.cases << " cases)\n";
  }
  return verify::all_passed(results) ? 0 : 2;
}

int cmd_verify_identities(const RunConfig& c, Sinks& sinks) {
  c.validate();
  const auto results = verify::verify_gate_identities({c.seed, c.trials, c.corrupt_convention});
  return report_identities(results, "verify-identities", c, sinks);
}

int cmd_universality(const RunConfig& c, Sinks& sinks) {
  c.validate();
  const auto results = verify::verify_universality({c.seed, c.random_states, c.corrupt_convention});
  return report_identities(results, "universality", c, sinks);
}

int cmd_calibrate_tau(const RunConfig& c, Sinks& sinks) {
  const Context ctx = Context::build(c);
  const double pure = protocol::calibrate_tau(ctx.params, ctx.ramps, protocol::CalibrationMode::PureDwell);
  const double tau = protocol::calibrate_tau(ctx.params, ctx.ramps, ctx.calibration);
  const double f = protocol::simulated_dwell_phase(ctx.params, ctx.ramps, tau);
  for (const auto& line : header_lines("calibrate-tau", c)) *sinks.csv << "# " << line << '\n';
  *sinks.csv << "calibration,tau_ns,pure_dwell_tau_ns,dwell_conditional_phase_rad\n";
  *sinks.csv << c.calibration << ',' << format_double(tau) << ',' << format_double(pure) << ',' << format_double(f)
             << '\n';
  *sinks.summary << "tau = " << format_double(tau) << " ns (pure dwell " << format_double(pure)
                 << " ns), simulated f(tau) - pi = " << format_double(gates::wrap_phase(f - std::numbers::pi))
                 << " rad\n";
  return 0;
}

int cmd_sweep_shuttle(const RunConfig& c, Sinks& sinks, int jobs) {
  const Context ctx = Context::build(c);
  const auto schedule = ctx.ramps.with_dwell(ctx.tau());
  const auto sweep = analysis::sweep_shuttle(ctx.params, schedule, c.shuttle_times_ns, jobs, c.shuttle_threshold);
  const auto header = header_lines("sweep-shuttle", c);
  analysis::write_shuttle_csv(*sinks.csv, sweep, header);
  *sinks.summary << "first shuttle time with flip-flop probability < " << format_double(sweep.threshold) << ": ";
  if (sweep.first_below_threshold) {
    *sinks.summary << format_double(*sweep.first_below_threshold) << " ns";
  } else {
    *sinks.summary << "none";
  }
  *sinks.summary << "; " << (sweep.non_increasing ? "non-increasing" : "NOT non-increasing") << " over the sweep\n";
  return 0;
}

int cmd_sweep_shift(const RunConfig& c, Sinks& sinks, int jobs) {
  const Context ctx = Context::build(c);
  analysis::ShiftSweepOptions opts;
  opts.kinds.clear();
  for (const auto& k : c.shift_kinds) opts.kinds.push_back(parse_kind(k));
  opts.deltas = c.shift_deltas;
  opts.fit_min = c.fit_min;
  opts.fit_max = c.fit_max;
  opts.reference = parse_reference(c.ideal_reference);
  opts.jobs = jobs;
  const protocol::ProtocolSetup setup(ctx.params, ctx.ramps.with_dwell(ctx.tau()), ctx.options);
  const auto sweep = analysis::sweep_shift(setup, opts);
  analysis::write_shift_csv(*sinks.csv, sweep, header_lines("sweep-shift", c));
  for (const auto& fit : sweep.slopes) {
    if (fit.channel != "max") continue;
    *sinks.summary << control::to_string(fit.kind) << ": log-log slope of the largest phase channel "
                   << (std::isnan(fit.slope) ? std::string("n/a") : format_double(fit.slope)) << " over "
                   << fit.points << " points in [" << format_double(c.fit_min) << ", " << format_double(c.fit_max)
                   << "] MV/m\n";
  }
  return 0;
}

int cmd_dipolar(const RunConfig& c, Sinks& sinks) {
  c.validate();
  const auto k = spin::Constants::defaults();
  struct Row {
    const char* pair;
    double g1, g2;
  };
  const Row rows[] = {{"electron-electron", k.gyro_electron, k.gyro_electron},
                      {"electron-nucleus", k.gyro_electron, k.gyro_phosphorus},
                      {"nucleus-nucleus", k.gyro_phosphorus, k.gyro_phosphorus}};
  for (const auto& line : header_lines("dipolar", c)) *sinks.csv << "# " << line << '\n';
  *sinks.csv << "pair,r_nm,max_strength_Hz\n";
  const char* units[] = {"MHz", "kHz", "Hz"};
  const double scale[] = {1e6, 1e3, 1.0};
  for (std::size_t i = 0; i < 3; ++i) {
    const double hz = spin::dipolar_max_strength({rows[i].g1, rows[i].g2, c.dipolar_r_nm}, k);
    *sinks.csv << rows[i].pair << ',' << format_double(c.dipolar_r_nm) << ',' << format_double(hz) << '\n';
    std::ostringstream v;
    v << std::setprecision(4) << hz / scale[i];
    *sinks.summary << rows[i].pair << ": " << v.str() << ' ' << units[i] << (i < 2 ? ", " : "");
  }
  *sinks.summary << " at r = " << format_double(c.dipolar_r_nm) << " nm\n";
  return 0;
}

}  // namespace

void RunConfig::validate() const {
  require_finite(b_mt, "b_mt");
  if (b_mt < 0.0) throw ValidationError("b_mt must be non-negative");
  for (double v : {e_start, ramp_time_ns, dt_ns, pre_idle_ns, travel_idle_ns, shuttle_threshold, fit_min, fit_max,
                   dipolar_r_nm}) {
    require_finite(v, "numeric config values");
  }
  if (ramp_time_ns <= 0.0) throw ValidationError("ramp_time_ns must be positive");
  if (dt_ns <= 0.0) throw ValidationError("dt_ns must be positive");
  if (tau_ns && (!std::isfinite(*tau_ns) || *tau_ns < 0.0)) throw ValidationError("tau_ns must be non-negative");
  parse_calibration(calibration);
  parse_reference(ideal_reference);
  if (shuttle_times_ns.empty()) throw ValidationError("shuttle_times_ns must not be empty");
  for (double t : shuttle_times_ns) {
    if (!std::isfinite(t) || t <= 0.0) throw ValidationError("shuttle_times_ns must be positive");
  }
  if (!(shuttle_threshold > 0.0)) throw ValidationError("shuttle_threshold must be positive");
  if (shift_deltas.empty()) throw ValidationError("shift_deltas must not be empty");
  for (double d : shift_deltas) require_finite(d, "shift_deltas");
  if (std::find(shift_deltas.begin(), shift_deltas.end(), 0.0) == shift_deltas.end()) {
    throw ValidationError("shift_deltas must include 0 for the baseline");
  }
  if (shift_kinds.empty()) throw ValidationError("shift_kinds must not be empty");
  for (const auto& k : shift_kinds) parse_kind(k);
  if (!(fit_min > 0.0) || !(fit_max > fit_min)) throw ValidationError("fit range must satisfy 0 < fit_min < fit_max");
  if (trials < 1) throw ValidationError("trials must be at least 1");
  if (random_states < 0) throw ValidationError("random_states must be non-negative");
  if (dipolar_r_nm <= 0.0) throw ValidationError("dipolar_r_nm must be positive");
  if (hyperfine_table.empty()) analytic.validate();
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> known = {
      "b_mt",           "hyperfine_table", "a_max_mhz",        "e_rop",          "kappa",
      "e_knee",         "knee_width",      "e_min",            "e_max",          "donor_depth_a0",
      "e_start",        "ramp_time_ns",    "dt_ns",            "tau_ns",         "calibration",
      "pre_idle_ns",    "travel_idle_ns",  "shuttle_times_ns", "shuttle_threshold", "shift_deltas",
      "shift_kinds",    "fit_min",         "fit_max",          "ideal_reference", "seed",
      "trials",         "random_states",   "corrupt_convention", "dipolar_r_nm"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ValidationError("unknown config key '" + key + "'");
  }
  RunConfig c;
  auto num = [&](const char* key, double& into) {
    if (j.contains(key)) into = get_number(j, key);
  };
  num("b_mt", c.b_mt);
  if (j.contains("hyperfine_table")) {
    c.hyperfine_table = get_string(j, "hyperfine_table");
    if (c.hyperfine_table.empty()) throw ValidationError("hyperfine_table must be a non-empty path");
    for (const char* key : kAnalyticKeys) {
      if (j.contains(key)) {
        throw ValidationError(std::string("config key '") + key + "' conflicts with hyperfine_table");
      }
    }
  }
  num("a_max_mhz", c.analytic.a_max_mhz);
  num("e_rop", c.analytic.e_rop);
  num("kappa", c.analytic.kappa);
  num("e_knee", c.analytic.e_knee);
  num("knee_width", c.analytic.knee_width);
  num("e_min", c.analytic.e_min);
  num("e_max", c.analytic.e_max);
  num("donor_depth_a0", c.analytic.donor_depth_a0);
  num("e_start", c.e_start);
  num("ramp_time_ns", c.ramp_time_ns);
  num("dt_ns", c.dt_ns);
  if (j.contains("tau_ns")) {
    const json& t = j.at("tau_ns");
    if (t.is_string()) {
      if (t.get<std::string>() != "calibrate") throw ValidationError("tau_ns must be a number or \"calibrate\"");
    } else {
      c.tau_ns = get_number(j, "tau_ns");
    }
  }
  if (j.contains("calibration")) c.calibration = get_string(j, "calibration");
  num("pre_idle_ns", c.pre_idle_ns);
  num("travel_idle_ns", c.travel_idle_ns);
  if (j.contains("shuttle_times_ns")) c.shuttle_times_ns = get_numbers(j, "shuttle_times_ns");
  num("shuttle_threshold", c.shuttle_threshold);
  if (j.contains("shift_deltas")) c.shift_deltas = get_numbers(j, "shift_deltas");
  if (j.contains("shift_kinds")) c.shift_kinds = get_strings(j, "shift_kinds");
  num("fit_min", c.fit_min);
  num("fit_max", c.fit_max);
  if (j.contains("ideal_reference")) c.ideal_reference = get_string(j, "ideal_reference");
  if (j.contains("seed")) c.seed = get_integer<std::uint64_t>(j, "seed");
  if (j.contains("trials")) c.trials = get_integer<int>(j, "trials");
  if (j.contains("random_states")) c.random_states = get_integer<int>(j, "random_states");
  if (j.contains("corrupt_convention")) {
    if (!j.at("corrupt_convention").is_boolean()) throw ValidationError("corrupt_convention must be a boolean");
    c.corrupt_convention = j.at("corrupt_convention").get<bool>();
  }
  num("dipolar_r_nm", c.dipolar_r_nm);
  c.validate();
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["b_mt"] = c.b_mt;
  if (!c.hyperfine_table.empty()) {
    j["hyperfine_table"] = c.hyperfine_table;
  } else {
    j["a_max_mhz"] = c.analytic.a_max_mhz;
    j["e_rop"] = c.analytic.e_rop;
    j["kappa"] = c.analytic.kappa;
    j["e_knee"] = c.analytic.e_knee;
    j["knee_width"] = c.analytic.knee_width;
    j["e_min"] = c.analytic.e_min;
    j["e_max"] = c.analytic.e_max;
    j["donor_depth_a0"] = c.analytic.donor_depth_a0;
  }
  j["e_start"] = c.e_start;
  j["ramp_time_ns"] = c.ramp_time_ns;
  j["dt_ns"] = c.dt_ns;
  if (c.tau_ns) {
    j["tau_ns"] = *c.tau_ns;
  } else {
    j["tau_ns"] = "calibrate";
  }
  j["calibration"] = c.calibration;
  j["pre_idle_ns"] = c.pre_idle_ns;
  j["travel_idle_ns"] = c.travel_idle_ns;
  j["shuttle_times_ns"] = c.shuttle_times_ns;
  j["shuttle_threshold"] = c.shuttle_threshold;
  j["shift_deltas"] = c.shift_deltas;
  j["shift_kinds"] = c.shift_kinds;
  j["fit_min"] = c.fit_min;
  j["fit_max"] = c.fit_max;
  j["ideal_reference"] = c.ideal_reference;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["random_states"] = c.random_states;
  j["corrupt_convention"] = c.corrupt_convention;
  j["dipolar_r_nm"] = c.dipolar_r_nm;
  return j;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '#') {
    std::istringstream lines(text);
    std::string line;
    const std::string tag = "# config: ";
    while (std::getline(lines, line) && !line.empty() && line[0] == '#') {
      if (line.rfind(tag, 0) == 0) return parse_config(json::parse(line.substr(tag.size())));
    }
    throw ValidationError("'" + path + "' has no '# config:' line");
  }
  return parse_config(json::parse(text));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adiabatic shuttling and dynamical decoupling gate simulator for donor spin pairs", "donorgate"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  int jobs = 1;
  auto add_common = [&](CLI::App* sub, bool sweep) {
    sub->add_option("--config", config_path, "JSON config, or a CSV written by this tool");
    sub->add_option("--out", out_path, "CSV output path (default: standard output)");
    if (sweep) sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  struct Sub {
    const char* name;
    const char* help;
    bool sweep;
  };
  const Sub subs[] = {
      {"verify-identities", "Check the gate-algebra identities against dense oracles", false},
      {"universality", "Simulate the ancilla-mediated CZ and measurement circuits", false},
      {"calibrate-tau", "Dwell time giving a conditional phase of pi", false},
      {"sweep-shuttle", "Flip-flop probability against shuttle time", true},
      {"sweep-shift", "Composite-gate error channels against field shifts", true},
      {"dipolar", "Worst-case dipolar coupling strengths", false},
  };
  for (const auto& s : subs) add_common(app.add_subcommand(s.name, s.help), s.sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig config = config_path.empty() ? parse_config(json::object()) : load_config_file(config_path);
    Sinks sinks;
    open_sinks(sinks, out_path, out, err);
    if (command == "verify-identities") return cmd_verify_identities(config, sinks);
    if (command == "universality") return cmd_universality(config, sinks);
    if (command == "calibrate-tau") return cmd_calibrate_tau(config, sinks);
    if (command == "sweep-shuttle") return cmd_sweep_shuttle(config, sinks, jobs);
    if (command == "sweep-shift") return cmd_sweep_shift(config, sinks, jobs);
    return cmd_dipolar(config, sinks);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    err << "error: invalid config JSON: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace donorgate::cli

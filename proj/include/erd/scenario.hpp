// Copyright 2026 The ERD Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "erd/analysis.hpp"
#include "erd/bath.hpp"
#include "erd/checks.hpp"
#include "erd/errors.hpp"
#include "erd/noise.hpp"
#include "erd/random.hpp"
#include "erd/sequence.hpp"
#include "erd/sm_gates.hpp"

namespace erd {

using json = nlohmann::json;

/// A batch experiment: kind plus fully defaulted parameters.
struct Scenario {
  std::string name;
  std::string kind;
  json parameters = json::object();
  std::uint64_t seed = 1;
  std::string output_path;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ConfigIssue {
  std::size_t line = 0;
  std::string key;
  std::string reason;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues)
      : Error(render(issues)), issues_(std::move(issues)) {}
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  static std::string render(const std::vector<ConfigIssue>& issues) {
    std::string s;
    for (const auto& i : issues) {
      if (!s.empty()) s += "\n";
      s += "line " + std::to_string(i.line) + ": " + (i.key.empty() ? "" : i.key + ": ") +
           i.reason;
    }
    return s;
  }
  std::vector<ConfigIssue> issues_;
};

namespace config {

enum class PType { Number, Integer, String, Bool, NumberList };

struct ParamSpec {
  std::string key;
  PType type;
  json def;  ///< null: required
  double lo = -std::numeric_limits<double>::infinity();
  bool lo_strict = false;
  std::vector<std::string> choices;
  std::size_t min_len = 0;
};

inline ParamSpec number(std::string k, json def, double lo = -INFINITY, bool strict = false) {
  return {std::move(k), PType::Number, std::move(def), lo, strict, {}, 0};
}
inline ParamSpec integer(std::string k, json def, double lo) {
  return {std::move(k), PType::Integer, std::move(def), lo, false, {}, 0};
}
inline ParamSpec choice(std::string k, json def, std::vector<std::string> c) {
  return {std::move(k), PType::String, std::move(def), -INFINITY, false, std::move(c), 0};
}
inline ParamSpec flag(std::string k, bool def) {
  return {std::move(k), PType::Bool, def, -INFINITY, false, {}, 0};
}
inline ParamSpec list(std::string k, json def, std::size_t min_len) {
  return {std::move(k), PType::NumberList, std::move(def), 0.0, true, {}, min_len};
}

inline const std::map<std::string, std::vector<ParamSpec>>& kinds() {
  static const std::map<std::string, std::vector<ParamSpec>> table = {
      {"verify-algebra", {integer("trials", 20, 1)}},
      {"storage-sim",
       {choice("mode", "differential", {"collective", "differential", "independent"}),
        number("alpha", 1.0, 0.0), number("cutoff", 2200.0, 0.0, true),
        choice("cutoff_unit", "ordinary", {"ordinary", "angular"}),
        number("band_ratio", 1000.0, 1.0, true), number("amplitude", 300.0, 0.0),
        integer("n_harmonics", 1024, 8), integer("n_traj", 200, 1),
        number("dt", nullptr, 0.0, true), number("base_step", 0.0, 0.0),
        number("horizon", 2e-3, 0.0, true), number("max_horizon", 1.0, 0.0)}},
      {"gate-sim",
       {choice("axis", "X", {"X", "Y"}), number("omega", 1.0, 0.0, true),
        number("angle", M_PI / 2, 0.0, true), list("gammas", json::array({1e-3, 3e-3, 1e-2}), 1),
        integer("bath_dim", 2, 1)}},
      {"block4-sim",
       {integer("n_ions", 4, 4), list("taus", json::array({0.1, 0.05, 0.025}), 1),
        integer("bath_dim", 4, 1), choice("bath", "commuting", {"commuting", "generic"})}},
      {"dt-scan",
       {number("alpha", 2.0, 0.0), number("omega_min", 1e-6, 0.0, true),
        number("omega_max", 1.0, 0.0, true), number("amplitude", 6.324555320336759e-4, 0.0),
        integer("n_harmonics", 4096, 8), integer("n_traj", 200, 1),
        choice("mode", "differential", {"collective", "differential", "independent"}),
        list("dt_grid", nullptr, 4), number("base_step", 0.05, 0.0),
        number("horizon", 50.0, 0.0, true), number("max_horizon", 1e7, 0.0),
        flag("slope_check", false), number("expected_slope", 2.0),
        number("slope_tolerance", 0.4, 0.0)}},
      {"formulas",
       {number("eta", 0.1, 0.0, true), number("omega_rabi", 2 * M_PI * 5e6, 0.0, true),
        integer("k_int", 1, 1), number("detuning", 2 * M_PI * 5e7),
        number("n_mean", 0.0, 0.0), integer("n_ions", 2, 1),
        number("omega0", 2 * M_PI * 5e6, 0.0, true), number("temperature", 0.01, 0.0, true),
        number("gamma", 1e3, 0.0), number("dt", 1e-9, 0.0, true), number("omega_c", 1e8, 0.0),
        integer("m_max", 3, 1), integer("k_prime", 1, 1), number("expect_tau_sm", 0.0, 0.0)}},
  };
  return table;
}

inline const std::set<std::string>& top_keys() {
  static const std::set<std::string> k = {"name", "kind", "seed", "output_path", "parameters"};
  return k;
}

/// Offsets of each top-level object in a JSON array, for error lines.
struct Spans {
  std::vector<std::pair<std::size_t, std::size_t>> objects;
  std::string_view text;

  explicit Spans(std::string_view t) : text(t) {
    int depth = 0;
    bool in_str = false, esc = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const char c = t[i];
      if (in_str) {
        if (esc) esc = false;
        else if (c == '\\') esc = true;
        else if (c == '"') in_str = false;
        continue;
      }
      if (c == '"') in_str = true;
      else if (c == '{' || c == '[') {
        if (c == '{' && depth == 1) start = i;
        ++depth;
      } else if (c == '}' || c == ']') {
        --depth;
        if (c == '}' && depth == 1) objects.emplace_back(start, i);
      }
    }
  }

  std::size_t line_at(std::size_t offset) const {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
  }

  std::size_t key_line(std::size_t index, const std::string& key) const {
    if (index >= objects.size()) return 1;
    const auto [a, b] = objects[index];
    const std::string quoted = "\"" + key + "\"";
    std::size_t pos = a;
    while ((pos = text.find(quoted, pos)) != std::string_view::npos && pos < b) {
      std::size_t k = pos + quoted.size();
      while (k < b && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
      if (k < b && text[k] == ':') return line_at(pos);
      pos += quoted.size();
    }
    return line_at(a);
  }
};

inline bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

inline std::optional<std::string> check_param(const ParamSpec& p, const json& v) {
  auto range = [&](double x) -> std::optional<std::string> {
    if (!std::isfinite(x)) return "must be finite";
    if (p.lo_strict ? !(x > p.lo) : !(x >= p.lo))
      return std::string("must be ") + (p.lo_strict ? "> " : ">= ") + short_num(p.lo);
    return std::nullopt;
  };
  switch (p.type) {
    case PType::Number:
      if (!v.is_number()) return "expected a number";
      return range(v.get<double>());
    case PType::Integer:
      if (!v.is_number_integer()) return "expected an integer";
      return range(v.get<double>());
    case PType::String: {
      if (!v.is_string()) return "expected a string";
      const auto s = v.get<std::string>();
      if (std::find(p.choices.begin(), p.choices.end(), s) == p.choices.end()) {
        std::string all;
        for (const auto& c : p.choices) all += (all.empty() ? "" : ", ") + c;
        return "must be one of " + all;
      }
      return std::nullopt;
    }
    case PType::Bool:
      if (!v.is_boolean()) return "expected true or false";
      return std::nullopt;
    case PType::NumberList:
      if (!v.is_array()) return "expected an array of numbers";
      if (v.size() < p.min_len) return "needs at least " + std::to_string(p.min_len) + " values";
      for (const auto& x : v) {
        if (!x.is_number()) return "expected an array of numbers";
        if (auto e = range(x.get<double>())) return "every value " + *e;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

inline std::string table_path(const std::string& report_path) {
  std::filesystem::path p(report_path);
  return p.replace_extension(".csv").string();
}

}  // namespace config

inline json to_json(const Scenario& s) {
  return json{{"name", s.name},
              {"kind", s.kind},
              {"seed", s.seed},
              {"output_path", s.output_path},
              {"parameters", s.parameters}};
}

/**
 * Parses a JSON array of scenario objects. Defaults are filled in, so the
 * result is the normalized form. All problems are collected and thrown
 * together as ConfigError.
 */
inline std::vector<Scenario> parse_config(std::string_view text) {
  using namespace config;
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const Spans sp(text);
    throw ConfigError({{sp.line_at(e.byte > 0 ? e.byte - 1 : 0), "", "syntax error: " + std::string(e.what())}});
  }
  const Spans spans(text);
  if (!root.is_array()) throw ConfigError({{1, "", "expected an array of scenarios"}});

  std::vector<ConfigIssue> issues;
  std::vector<Scenario> out;
  std::set<std::string> names;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const json& obj = root[i];
    auto issue = [&](const std::string& key, std::string reason) {
      issues.push_back({spans.key_line(i, key.empty() ? "kind" : key), key, std::move(reason)});
    };
    if (!obj.is_object()) {
      issues.push_back({spans.line_at(0), "", "scenario " + std::to_string(i) + " is not an object"});
      continue;
    }
    for (const auto& [k, v] : obj.items())
      if (!top_keys().count(k)) issue(k, "unknown key");

    Scenario s;
    if (!obj.contains("kind")) {
      issue("kind", "missing required key");
      continue;
    }
    if (!obj["kind"].is_string() || !kinds().count(obj["kind"].get<std::string>())) {
      issue("kind", "unknown kind");
      continue;
    }
    s.kind = obj["kind"].get<std::string>();
    s.name = s.kind + "-" + std::to_string(i);
    if (obj.contains("name")) {
      if (!obj["name"].is_string() || !valid_name(obj["name"].get<std::string>()))
        issue("name", "must be a non-empty string of letters, digits, '-', '_' or '.'");
      else
        s.name = obj["name"].get<std::string>();
    }
    if (!names.insert(s.name).second) issue("name", "duplicate scenario name '" + s.name + "'");
    if (obj.contains("seed")) {
      if (!obj["seed"].is_number_unsigned())
        issue("seed", "expected a non-negative integer");
      else
        s.seed = obj["seed"].get<std::uint64_t>();
    }
    s.output_path = s.name + ".json";
    if (obj.contains("output_path")) {
      const json& o = obj["output_path"];
      if (!o.is_string()) {
        issue("output_path", "expected a string");
      } else {
        const std::filesystem::path p(o.get<std::string>());
        bool bad = p.empty() || p.is_absolute() || p.extension() != ".json";
        for (const auto& part : p)
          if (part == "..") bad = true;
        if (bad)
          issue("output_path", "must be a relative path ending in .json without '..'");
        else
          s.output_path = p.generic_string();
      }
    }
    json given = json::object();
    if (obj.contains("parameters")) {
      if (!obj["parameters"].is_object())
        issue("parameters", "expected an object");
      else
        given = obj["parameters"];
    }
    const auto& specs = kinds().at(s.kind);
    for (const auto& [k, v] : given.items()) {
      if (std::none_of(specs.begin(), specs.end(), [&](const ParamSpec& p) { return p.key == k; }))
        issue(k, "unknown parameter for kind " + s.kind);
    }
    for (const auto& p : specs) {
      if (!given.contains(p.key)) {
        if (p.def.is_null())
          issue(p.key, "missing required parameter");
        else
          s.parameters[p.key] = p.def;
        continue;
      }
      if (auto e = check_param(p, given[p.key]))
        issue(p.key, *e);
      else
        s.parameters[p.key] = given[p.key];
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(issues.begin(), issues.end(),
                   [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return out;
}

/// Normalized text form; parse_config of it returns the same scenarios.
inline std::string serialize(const std::vector<Scenario>& scenarios) {
  json arr = json::array();
  for (const auto& s : scenarios) arr.push_back(to_json(s));
  return arr.dump(2) + "\n";
}

struct RunOptions {
  std::filesystem::path out_dir = ".";
  unsigned jobs = 1;
};

struct ScenarioResult {
  std::string name;
  std::string kind;
  std::vector<Check> checks;
  bool partial = false;
  std::string error;
  std::vector<std::string> artifacts;

  bool passed() const {
    return !partial && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

namespace runners {

inline double num(const Scenario& s, const char* k) { return s.parameters.at(k).get<double>(); }
inline std::size_t count(const Scenario& s, const char* k) {
  return s.parameters.at(k).get<std::size_t>();
}
inline std::string str(const Scenario& s, const char* k) {
  return s.parameters.at(k).get<std::string>();
}
inline std::vector<double> nums(const Scenario& s, const char* k) {
  return s.parameters.at(k).get<std::vector<double>>();
}

inline void verify_algebra(const Scenario& s, const RunOptions&, std::vector<Check>& checks,
                           json& results, std::string&) {
  for (auto& c : algebra_suite(s.seed, static_cast<int>(count(s, "trials"))))
    checks.push_back(std::move(c));
  results["checks_run"] = checks.size();
}

inline void storage_sim(const Scenario& s, const RunOptions& ro, std::vector<Check>& checks,
                        json& results, std::string& csv) {
  SpectralNoise n;
  n.alpha = num(s, "alpha");
  n.omega_max = num(s, "cutoff") * (str(s, "cutoff_unit") == "ordinary" ? 2 * M_PI : 1.0);
  n.omega_min = n.omega_max / num(s, "band_ratio");
  n.amplitude = num(s, "amplitude");
  n.n_harmonics = count(s, "n_harmonics");
  n.seed = s.seed;
  DephasingOptions o;
  o.mode = parse_mode(str(s, "mode"));
  o.n_traj = count(s, "n_traj");
  o.horizon = num(s, "horizon");
  o.max_horizon = num(s, "max_horizon");
  o.jobs = ro.jobs;
  const double dt = num(s, "dt");
  const double base_step = num(s, "base_step") > 0 ? num(s, "base_step") : dt;
  const auto free = dephasing_run(PulseSequence({Free{base_step}}), n, o);
  const auto pulsed = dephasing_run(symmetrize_pair(dt), n, o);
  results["omega_max"] = n.omega_max;
  results["omega_min"] = n.omega_min;
  results["t2_free"] = free.crossed ? json(free.t2) : json(nullptr);
  results["t2_pulsed"] = pulsed.crossed ? json(pulsed.t2) : json(nullptr);
  results["dt_omega_max"] = dt * n.omega_max;
  csv = "series,t,coherence\n";
  for (std::size_t k = 0; k < free.times.size(); ++k)
    csv += "free," + g17(free.times[k]) + "," + g17(free.coherence[k]) + "\n";
  for (std::size_t k = 0; k < pulsed.times.size(); ++k)
    csv += "pulsed," + g17(pulsed.times[k]) + "," + g17(pulsed.coherence[k]) + "\n";
  if (o.mode == NoiseMode::Collective) {
    double low = 1.0;
    for (double c : free.coherence) low = std::min(low, c);
    for (double c : pulsed.coherence) low = std::min(low, c);
    checks.push_back(check_below("storage.dfs_immunity", 1.0 - low, 1e-10));
  } else {
    const double gain = pulsed.t2 / free.t2;
    results["gain"] = std::isfinite(gain) ? json(gain) : json(nullptr);
    checks.push_back({"storage.pulsed_t2_not_shorter", gain, ">= 1", 0.0, gain >= 1.0});
  }
}

inline void gate_sim(const Scenario& s, const RunOptions&, std::vector<Check>& checks,
                     json& results, std::string& csv) {
  std::mt19937_64 rng(s.seed);
  const Axis axis = str(s, "axis") == "X" ? Axis::X : Axis::Y;
  const double omega = num(s, "omega"), angle = num(s, "angle");
  const double t = angle / omega;
  const auto bath_dim = static_cast<Index>(count(s, "bath_dim"));
  const auto seq = combined_gate(axis, t, omega);
  const Matrix leak = suite::leak_coupling(bath_dim, rng);
  const Matrix target = logical_target(axis, angle);
  const DfsRegister reg({IonPair{0, 1}}, 2);
  const Layout lay{2, {bath_dim}};
  csv = "gamma,infidelity,bound\n";
  json rows = json::array();
  for (double g : nums(s, "gammas")) {
    const double inf = 1.0 - code_fidelity(propagator(seq, {lay, g * leak}), target, reg, bath_dim);
    const double bound = 10.0 * g * g * t * t;
    csv += g17(g) + "," + g17(inf) + "," + g17(bound) + "\n";
    rows.push_back({{"gamma", g}, {"infidelity", inf}, {"bound", bound}});
    checks.push_back(check_below("gate.infidelity[gamma=" + short_num(g) + "]", inf, bound));
  }
  results["rows"] = rows;
  results["pulse_count"] = seq.pulse_count();
}

inline void block4_sim(const Scenario& s, const RunOptions&, std::vector<Check>& checks,
                       json& results, std::string& csv) {
  std::mt19937_64 rng(s.seed);
  const std::size_t n = count(s, "n_ions");
  if (n % 4 != 0) throw DomainError("block4-sim: n_ions must be a multiple of 4");
  const auto bd = static_cast<Index>(count(s, "bath_dim"));
  const bool commuting = str(s, "bath") == "commuting";
  std::vector<Matrix> bs = commuting ? random_commuting_hermitian(bd, n, rng) : std::vector<Matrix>{};
  if (!commuting)
    for (std::size_t k = 0; k < n; ++k) bs.push_back(random_hermitian(bd, rng));
  OperatorSum h(n);
  BathBindings bind;
  for (std::size_t k = 0; k < n; ++k) {
    const std::string slot = "B" + std::to_string(k);
    bind[slot] = bs[k];
    h += OperatorSum::site(n, k, Pauli::Z).with_bath(slot);
  }
  const Layout lay{n, {bd}};
  const OpenSystem sys{lay, to_dense(h, lay, bind)};
  csv = "tau,residual_norm,residual_phase\n";
  std::vector<double> taus, phases;
  for (double tau : nums(s, "taus")) {
    const auto seq = symmetrize_block4(tau, n);
    const double r = spectral_norm(block_collective_residual(effective_generator(seq, sys), n, bd));
    csv += g17(tau) + "," + g17(r) + "," + g17(r * seq.cycle_time()) + "\n";
    taus.push_back(tau);
    phases.push_back(r * seq.cycle_time());
    if (commuting) checks.push_back(check_below("block4.residual[tau=" + short_num(tau) + "]", r, 1e-10));
  }
  if (!commuting && taus.size() >= 2) {
    const double slope = loglog_slope(taus, phases);
    results["residual_phase_slope"] = slope;
    checks.push_back(check_near("block4.generic_residual_slope", slope, 2.0, 0.3));
  }
  results["pulse_count"] = symmetrize_block4(1.0, n).pulse_count();
}

inline void dt_scan(const Scenario& s, const RunOptions& ro, std::vector<Check>& checks,
                    json& results, std::string& csv) {
  SpectralNoise n;
  n.alpha = num(s, "alpha");
  n.omega_min = num(s, "omega_min");
  n.omega_max = num(s, "omega_max");
  n.amplitude = num(s, "amplitude");
  n.n_harmonics = count(s, "n_harmonics");
  n.seed = s.seed;
  DephasingOptions o;
  o.mode = parse_mode(str(s, "mode"));
  o.n_traj = count(s, "n_traj");
  o.horizon = num(s, "horizon");
  o.max_horizon = num(s, "max_horizon");
  o.jobs = ro.jobs;
  auto grid = nums(s, "dt_grid");
  std::sort(grid.begin(), grid.end(), std::greater<>());
  const auto rows = suppression_scan([](double dt) { return symmetrize_pair(dt); }, grid, n, o,
                                     num(s, "base_step"));
  csv = scan_csv(rows);
  bool monotone = true;
  for (std::size_t k = 1; k < rows.size(); ++k)
    if (!(rows[k].gain > rows[k - 1].gain)) monotone = false;
  checks.push_back(check_true("scan.gain_monotone_in_inverse_dt", monotone));
  std::vector<double> inv, gain;
  for (const auto& r : rows) {
    if (std::isfinite(r.gain) && r.gain > 0) {
      inv.push_back(1.0 / r.dt);
      gain.push_back(r.gain);
    }
  }
  if (inv.size() >= 2) {
    const double slope = loglog_slope(inv, gain);
    results["gain_slope"] = slope;
    if (s.parameters.at("slope_check").get<bool>())
      checks.push_back(check_near("scan.gain_slope", slope, num(s, "expected_slope"),
                                  num(s, "slope_tolerance")));
  } else if (s.parameters.at("slope_check").get<bool>()) {
    checks.push_back({"scan.gain_slope", NAN, short_num(num(s, "expected_slope")),
                      num(s, "slope_tolerance"), false});
  }
}

inline void formulas(const Scenario& s, const RunOptions&, std::vector<Check>& checks,
                     json& results, std::string&) {
  HardwareParams hw;
  hw.eta = num(s, "eta");
  hw.omega_rabi = num(s, "omega_rabi");
  hw.k_int = static_cast<int>(count(s, "k_int"));
  hw.detuning = num(s, "detuning");
  hw.n_mean = num(s, "n_mean");
  hw.n_ions = static_cast<int>(count(s, "n_ions"));
  const double tau = tau_sm(hw);
  results["tau_sm"] = tau;
  const auto ld = lamb_dicke_margin(hw);
  results["lamb_dicke"] = {{"margin", ld.margin}, {"infidelity_scale", ld.infidelity_scale},
                           {"within_limit", ld.within_limit}};
  if (hw.detuning != 0.0) {
    const auto pen = off_resonant_penalty(hw);
    results["off_resonant_penalty"] = {{"value", pen.value}, {"perturbative", pen.perturbative}};
  }
  VibBath v;
  v.omega0 = num(s, "omega0");
  v.temperature = num(s, "temperature");
  v.gamma = num(s, "gamma");
  const auto th = thermal_numbers(v);
  results["n_thermal"] = th.n_mean;
  results["t_dec"] = th.t_dec_infinite ? json(nullptr) : json(th.t_dec);
  const auto ts = timescale_check(num(s, "dt"), num(s, "omega_c"), th.t_dec);
  results["timescale"] = {{"margin", ts.margin}, {"satisfied", ts.satisfied}};
  json canc = json::array();
  for (int m = 1; m <= static_cast<int>(count(s, "m_max")); ++m) {
    const auto c = cancellation_constraints(m, hw, static_cast<int>(count(s, "k_prime")));
    canc.push_back({{"m", m}, {"delta_required", c.delta_required}, {"eta_required", c.eta_required},
                    {"lamb_dicke_margin", c.lamb_dicke_margin},
                    {"lamb_dicke_compatible", c.lamb_dicke_compatible}});
    checks.push_back(check_true("formulas.cancellation_incompatible[m=" + std::to_string(m) + "]",
                                !c.lamb_dicke_compatible));
  }
  results["cancellation"] = canc;
  const double expect = num(s, "expect_tau_sm");
  if (expect > 0.0)
    checks.push_back(check_near("formulas.tau_sm", tau, expect, 0.01 * expect));
}

}  // namespace runners

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot open " + p.string() + " for writing");
  f << text;
  if (!f) throw Error("write failed for " + p.string());
}

inline json checks_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name},
                   {"measured", std::isfinite(c.measured) ? json(c.measured) : json(nullptr)},
                   {"expected", c.expected},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass}});
  return arr;
}

/**
 * Runs one scenario and writes its report JSON at output_path (and a CSV
 * table next to it for tabular kinds). On failure the report is still
 * written, marked partial.
 */
inline ScenarioResult run(const Scenario& s, const RunOptions& ro) {
  ScenarioResult r{s.name, s.kind, {}, false, "", {}};
  json results = json::object();
  std::string csv;
  try {
    using Fn = void (*)(const Scenario&, const RunOptions&, std::vector<Check>&, json&, std::string&);
    static const std::map<std::string, Fn> table = {
        {"verify-algebra", runners::verify_algebra}, {"storage-sim", runners::storage_sim},
        {"gate-sim", runners::gate_sim},             {"block4-sim", runners::block4_sim},
        {"dt-scan", runners::dt_scan},               {"formulas", runners::formulas}};
    table.at(s.kind)(s, ro, r.checks, results, csv);
  } catch (const std::exception& e) {
    r.partial = true;
    r.error = e.what();
  }
  const auto report = ro.out_dir / s.output_path;
  if (!csv.empty()) {
    const auto table = ro.out_dir / config::table_path(s.output_path);
    write_text(table, csv);
    r.artifacts.push_back(table.string());
  }
  json doc = {{"scenario", to_json(s)},
              {"partial", r.partial},
              {"passed", r.passed()},
              {"checks", checks_json(r.checks)},
              {"results", results}};
  if (r.partial) doc["error"] = r.error;
  write_text(report, doc.dump(2) + "\n");
  r.artifacts.push_back(report.string());
  return r;
}

/// Human-readable summary; returns true when every check passed.
inline bool report(const std::vector<ScenarioResult>& results, std::ostream& os) {
  if (results.empty()) {
    os << "warning: no scenarios\n";
    return true;
  }
  std::size_t n = 0, failed = 0;
  for (const auto& r : results) {
    os << "== " << r.name << " (" << r.kind << ")\n";
    for (const auto& c : r.checks) {
      os << check_line(c) << "\n";
      ++n;
      if (!c.pass) ++failed;
    }
    if (r.partial) {
      os << "FAIL  " << r.name << ".run  error: " << r.error << "\n";
      ++n;
      ++failed;
    }
  }
  if (failed == 0)
    os << "OK (" << n << " checks)\n";
  else
    os << "FAILED (" << failed << " of " << n << " checks)\n";
  return failed == 0;
}

/// The built-in configuration behind `verify`.
inline std::vector<Scenario> builtin_verify_config() {
  return parse_config(R"([{"name": "verify-algebra", "kind": "verify-algebra"}])");
}

}  // namespace erd

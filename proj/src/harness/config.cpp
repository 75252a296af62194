// Copyright 2026 The lambda-sim Authors
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

#include "lambda_sim/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "lambda_sim/propagator.hpp"

namespace lambda_sim::harness {

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"params", {"g0", "r", "gamma", "delta", "n", "phi"}},
      {"run",
       {"process", "dissipation", "t_end", "stride", "seed", "n_traj", "output",
        "constant_level"}},
      {"solver", {"method", "rel_tol", "abs_tol", "max_step"}},
      {"sweep", {"process", "g0", "gamma", "r"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw UsageError("invalid number for " + key + ": '" + v + "'");
  }
}

long long to_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long n = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw UsageError("invalid integer for " + key + ": '" + v + "'");
  }
}

const std::string* find(const Settings& s, const std::string& key) {
  auto it = s.find(key);
  return it == s.end() ? nullptr : &it->second;
}

}  // namespace

bool is_known_key(const std::string& dotted_key) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos) return false;
  auto it = known_keys().find(dotted_key.substr(0, dot));
  return it != known_keys().end() && it->second.count(dotted_key.substr(dot + 1)) > 0;
}

Settings parse_config(std::istream& in, const std::string& origin) {
  Settings out;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw UsageError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_keys().count(section)) throw UsageError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(where + ": expected key = value");
    if (section.empty()) throw UsageError(where + ": key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string dotted = section + "." + key;
    if (!is_known_key(dotted)) throw UsageError(where + ": unknown key '" + key + "' in [" + section + "]");
    out[dotted] = value;
  }
  return out;
}

Settings load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  return parse_config(in, path);
}

Settings overlay(Settings base, const Settings& top) {
  for (const auto& [k, v] : top) base[k] = v;
  return base;
}

std::string to_string(Process p) { return p == Process::Storage ? "storage" : "retrieval"; }

std::string to_string(Dissipation d) {
  switch (d) {
    case Dissipation::None: return "none";
    case Dissipation::Resummed: return "resummed";
    case Dissipation::MonteCarlo: return "montecarlo";
    case Dissipation::Master: return "master";
  }
  return "none";
}

Process parse_process(const std::string& s) {
  if (s == "storage") return Process::Storage;
  if (s == "retrieval") return Process::Retrieval;
  throw UsageError("unknown process '" + s + "' (storage|retrieval)");
}

Dissipation parse_dissipation(const std::string& s) {
  if (s == "none") return Dissipation::None;
  if (s == "resummed") return Dissipation::Resummed;
  if (s == "montecarlo") return Dissipation::MonteCarlo;
  if (s == "master") return Dissipation::Master;
  throw UsageError("unknown dissipation '" + s + "' (none|resummed|montecarlo|master)");
}

PulseKind pulse_kind(Process p) {
  return p == Process::Storage ? PulseKind::Storage : PulseKind::Retrieval;
}

ControlPulse RunSpec::pulse() const {
  if (constant_level) return ControlPulse::constant(*constant_level);
  return ControlPulse::for_process(pulse_kind(process), params);
}

std::vector<double> RunSpec::output_grid() const {
  const auto n = static_cast<std::size_t>(std::llround(t_end / stride));
  std::vector<double> grid = uniform_grid(0.0, t_end, std::max<std::size_t>(n, 1) + 1);
  return grid;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(to_double("list", item));
  }
  if (out.empty()) throw UsageError("empty list '" + s + "'");
  return out;
}

RunSpec run_spec_from(const Settings& s) {
  RunSpec spec;
  if (auto v = find(s, "run.process")) spec.process = parse_process(*v);
  if (auto v = find(s, "params.g0")) spec.params.g0 = to_double("g0", *v);
  if (auto v = find(s, "params.r")) spec.params.r = to_double("r", *v);
  if (auto v = find(s, "params.gamma")) spec.params.gamma = to_double("gamma", *v);
  if (auto v = find(s, "params.delta")) {
    spec.params.delta_s = spec.params.delta_c = to_double("delta", *v);
  }
  if (auto v = find(s, "params.n")) spec.params.n = static_cast<int>(to_integer("n", *v));
  if (auto v = find(s, "params.phi")) spec.params.phi = to_double("phi", *v);
  try {
    spec.params.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (auto v = find(s, "solver.method")) {
    if (*v == "adaptive") spec.solver.method = SolverMethod::AdaptiveRK45;
    else if (*v == "rk4") spec.solver.method = SolverMethod::FixedRK4;
    else throw UsageError("unknown solver method '" + *v + "' (adaptive|rk4)");
  }
  if (auto v = find(s, "solver.rel_tol")) spec.solver.rel_tol = to_double("rel_tol", *v);
  if (auto v = find(s, "solver.abs_tol")) spec.solver.abs_tol = to_double("abs_tol", *v);
  if (auto v = find(s, "solver.max_step")) spec.solver.max_step = to_double("max_step", *v);
  try {
    spec.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (auto v = find(s, "run.constant_level")) {
    spec.constant_level = to_double("constant_level", *v);
    if (*spec.constant_level < 0.0) throw UsageError("constant_level must be >= 0");
  }

  spec.dissipation = spec.params.gamma > 0.0 ? Dissipation::Resummed : Dissipation::None;
  if (auto v = find(s, "run.dissipation")) spec.dissipation = parse_dissipation(*v);
  if (spec.dissipation == Dissipation::None && spec.params.gamma > 0.0)
    throw UsageError("dissipation 'none' conflicts with gamma > 0");

  spec.t_end = default_t_end(spec.pulse());
  if (auto v = find(s, "run.t_end")) spec.t_end = to_double("t_end", *v);
  if (!(spec.t_end > 0.0)) throw UsageError("t_end must be positive");
  spec.stride = spec.t_end / 2000.0;
  if (auto v = find(s, "run.stride")) spec.stride = to_double("stride", *v);
  if (!(spec.stride > 0.0) || spec.stride > spec.t_end)
    throw UsageError("stride must lie in (0, t_end]");

  if (auto v = find(s, "run.seed")) {
    const long long seed = to_integer("seed", *v);
    if (seed < 0) throw UsageError("seed must be non-negative");
    spec.seed = static_cast<std::uint64_t>(seed);
  }
  if (auto v = find(s, "run.n_traj")) {
    spec.n_traj = static_cast<int>(to_integer("n_traj", *v));
    if (spec.n_traj < 100) throw UsageError("n_traj must be >= 100");
  }
  if (auto v = find(s, "run.output")) spec.output = *v;
  return spec;
}

std::size_t SweepSpec::cell_count() const {
  return processes.size() * g0.size() * gamma.size() * r.size();
}

std::vector<RunSpec> SweepSpec::cells() const {
  std::vector<RunSpec> out;
  out.reserve(cell_count());
  for (Process p : processes)
    for (double g : g0)
      for (double gm : gamma)
        for (double rr : r) {
          RunSpec c = base;
          c.process = p;
          c.params.g0 = g;
          c.params.gamma = gm;
          c.params.r = rr;
          c.params.validate();
          if (gm == 0.0) c.dissipation = Dissipation::None;
          else if (c.dissipation == Dissipation::None) c.dissipation = Dissipation::Resummed;
          c.t_end = default_t_end(c.pulse());
          c.stride = c.t_end / 2000.0;
          out.push_back(std::move(c));
        }
  return out;
}

SweepSpec sweep_spec_from(const Settings& s) {
  Settings run_only;
  for (const auto& [k, v] : s)
    if (k.rfind("sweep.", 0) != 0) run_only[k] = v;
  SweepSpec spec;
  spec.base = run_spec_from(run_only);
  spec.base.constant_level.reset();
  if (auto v = find(s, "sweep.process")) {
    spec.processes.clear();
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!trim(item).empty()) spec.processes.push_back(parse_process(trim(item)));
  }
  if (auto v = find(s, "sweep.g0")) spec.g0 = parse_list(*v);
  if (auto v = find(s, "sweep.gamma")) spec.gamma = parse_list(*v);
  if (auto v = find(s, "sweep.r")) spec.r = parse_list(*v);
  if (spec.processes.empty()) throw UsageError("sweep needs at least one process");
  for (double g : spec.g0) if (!(g > 0.0)) throw UsageError("sweep g0 values must be > 0");
  for (double r : spec.r) if (!(r > 0.0)) throw UsageError("sweep r values must be > 0");
  for (double g : spec.gamma) if (!(g >= 0.0)) throw UsageError("sweep gamma values must be >= 0");
  return spec;
}

SweepSpec sweep_preset(const std::string& name) {
  static const std::map<std::string, std::pair<Process, double>> presets = {
      {"fig2", {Process::Storage, 0.05}},   {"fig3", {Process::Storage, 0.1}},
      {"fig4", {Process::Storage, 0.2}},    {"fig5", {Process::Storage, 0.1}},
      {"fig6", {Process::Retrieval, 0.05}}, {"fig7", {Process::Retrieval, 0.1}},
      {"fig8", {Process::Retrieval, 0.2}},  {"fig9", {Process::Retrieval, 0.1}},
  };
  auto it = presets.find(name);
  if (it == presets.end()) throw UsageError("unknown preset '" + name + "' (fig2..fig9)");
  SweepSpec spec;
  spec.processes = {it->second.first};
  spec.g0 = {it->second.second};
  spec.r = {0.1, 0.2, 0.5, 0.8};
  if (name == "fig5" || name == "fig9") spec.gamma = {0.0, 0.1};
  else spec.gamma = {0.0, 0.1, 0.5, 1.0};
  return spec;
}

}  // namespace lambda_sim::harness

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

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambda_sim/model.hpp"
#include "lambda_sim/ode.hpp"

namespace lambda_sim::harness {

/// Bad configuration or command-line input (maps to exit status 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat "section.key" -> value view of a config file or of CLI flags.
using Settings = std::map<std::string, std::string>;

/// Parses line-oriented `key = value` text with `[section]` headers. Blank
/// lines and lines starting with '#' or ';' are skipped. Unknown sections or
/// keys raise UsageError naming the line.
Settings parse_config(std::istream& in, const std::string& origin = "<config>");
Settings load_config(const std::string& path);

/// Entries of `top` replace those of `base`.
Settings overlay(Settings base, const Settings& top);

bool is_known_key(const std::string& dotted_key);

enum class Process { Storage, Retrieval };
enum class Dissipation { None, Resummed, MonteCarlo, Master };

std::string to_string(Process p);
std::string to_string(Dissipation d);
Process parse_process(const std::string& s);
Dissipation parse_dissipation(const std::string& s);
PulseKind pulse_kind(Process p);

struct RunSpec {
  Process process = Process::Retrieval;
  Dissipation dissipation = Dissipation::None;
  SystemParams params;
  SolverOptions solver;
  double t_end = 0.0;   // resolved: 8/r unless overridden
  double stride = 0.0;  // resolved: t_end/2000 unless overridden
  std::uint64_t seed = 12345;
  int n_traj = 1000;
  std::optional<double> constant_level;
  std::string output = "-";

  ControlPulse pulse() const;
  std::vector<double> output_grid() const;
};

struct SweepSpec {
  std::vector<Process> processes{Process::Storage};
  std::vector<double> g0{0.05};
  std::vector<double> gamma{0.0};
  std::vector<double> r{0.1, 0.2, 0.5, 0.8};
  RunSpec base;

  std::size_t cell_count() const;
  /// Cells in lexicographic order: process, g0, gamma, r.
  std::vector<RunSpec> cells() const;
};

/// Builds a run spec from merged settings; unset entries take built-in
/// defaults. Throws UsageError on invalid values.
RunSpec run_spec_from(const Settings& s);
SweepSpec sweep_spec_from(const Settings& s);

/// Named sweep grids ("fig2" ... "fig9").
SweepSpec sweep_preset(const std::string& name);

std::vector<double> parse_list(const std::string& s);

}  // namespace lambda_sim::harness

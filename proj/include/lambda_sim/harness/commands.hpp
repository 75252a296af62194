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

#include <array>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "lambda_sim/harness/config.hpp"
#include "lambda_sim/harness/csv.hpp"
#include "lambda_sim/propagator.hpp"

namespace lambda_sim::harness {

/// Exit statuses of the CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
  kExitValidation = 4,
};

/// Simulates one run. Dissipation "none" uses the eigenbasis equations;
/// "master" and "montecarlo" rows carry NaN eigen amplitudes, F =
/// sqrt(<u_1|rho|u_1>) and Z = tr(rho).
TrajectoryRecord simulate(const RunSpec& spec);

Metadata run_metadata(const RunSpec& spec);

/// Writes the trajectory CSV for `spec` to spec.output.
void cmd_run(const RunSpec& spec);
std::string render_run(const RunSpec& spec);

struct SweepRow {
  Process process;
  double g0;
  double gamma;
  double r;
  double F_final;
  std::array<double, 3> pops;
  double drift;
};

/// Cells run on the OpenMP pool; rows come back in grid order.
std::vector<SweepRow> execute_sweep(const SweepSpec& spec);
std::vector<SweepRow> execute_sweep_serial(const SweepSpec& spec);
std::string render_sweep(const SweepSpec& spec, const std::vector<SweepRow>& rows);
void cmd_sweep(const SweepSpec& spec, const std::string& output);

struct Table1Cell {
  double r;
  double g0;
  double simulated;
  double berry;
  double reference;        // published simulated value
  double reference_berry;  // published closed-form value
  bool flagged;            // |simulated - reference| > 0.03
};

/// 18 retrieval cells at Gamma = 0, r-major order.
std::vector<Table1Cell> compute_table1(const SolverOptions& opts = {});
std::string render_table1_csv(const std::vector<Table1Cell>& cells);
std::string render_table1_text(const std::vector<Table1Cell>& cells);
/// Writes the CSV to csv_path and the text table to `text_out`.
void cmd_table1(const std::string& csv_path, std::ostream& text_out);

/// Figure ids fig2..fig9; "all" expands to all eight.
std::vector<std::string> figure_ids(const std::string& which);

struct PanelFile {
  std::string name;  // e.g. fig2_a.csv
  std::string content;
};

std::vector<PanelFile> render_figure(const std::string& id);
/// Writes one CSV per panel into out_dir; returns the file names written.
std::vector<std::string> cmd_figures(const std::string& which, const std::string& out_dir);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

struct ValidateOptions {
  /// Multiplies every tolerance; values < 1 tighten the suite.
  double tolerance_scale = 1.0;
};

std::vector<CheckResult> run_validation(const ValidateOptions& opts = {});
/// Prints one line per check; returns kExitOk or kExitValidation.
int cmd_validate(const ValidateOptions& opts, std::ostream& out);

}  // namespace lambda_sim::harness

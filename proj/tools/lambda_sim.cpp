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

// Command-line front end: run, sweep, table1, figures, validate.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lambda_sim/dissipative.hpp"
#include "lambda_sim/harness/commands.hpp"
#include "lambda_sim/harness/config.hpp"
#include "lambda_sim/ode.hpp"
#include "lambda_sim/parallel.hpp"

namespace h = lambda_sim::harness;

namespace {

struct Flag {
  std::string key;
  std::string value;
  CLI::Option* opt = nullptr;
};

// Every flag is captured as a string; only flags that were actually given
// enter the overlay, so config values survive otherwise.
class FlagSet {
 public:
  void add(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
    flags_.push_back(std::make_unique<Flag>());
    Flag& f = *flags_.back();
    f.key = key;
    f.opt = app->add_option(name, f.value, help);
  }

  h::Settings given() const {
    h::Settings s;
    for (const auto& f : flags_)
      if (f->opt->count() > 0) s[f->key] = f->value;
    return s;
  }

 private:
  std::vector<std::unique_ptr<Flag>> flags_;
};

void add_model_flags(CLI::App* app, FlagSet& flags) {
  flags.add(app, "--g0", "params.g0", "single-photon coupling g0 / Omega0");
  flags.add(app, "--r", "params.r", "pulse switching rate r / Omega0");
  flags.add(app, "--gamma", "params.gamma", "dissipation rate Gamma / Omega0");
  flags.add(app, "--delta", "params.delta", "common one-photon detuning");
  flags.add(app, "--n", "params.n", "photon number");
  flags.add(app, "--phi", "params.phi", "control-field phase");
  flags.add(app, "--method", "solver.method", "adaptive | rk4");
  flags.add(app, "--rtol", "solver.rel_tol", "relative tolerance");
  flags.add(app, "--atol", "solver.abs_tol", "absolute tolerance");
  flags.add(app, "--max-step", "solver.max_step", "step cap (fixed step for rk4)");
}

h::Settings merged(const std::string& config_path, const h::Settings& cli) {
  h::Settings base;
  if (!config_path.empty()) base = h::load_config(config_path);
  return h::overlay(std::move(base), cli);
}

}  // namespace

int main(int argc, char** argv) {
  lambda_sim::configure_threads_from_env();

  CLI::App app{"Photon storage and retrieval in a three-level Lambda system"};
  app.set_version_flag("--version", std::string(h::kToolVersion));
  app.require_subcommand(1);

  std::string config_path;

  auto* run = app.add_subcommand("run", "simulate one trajectory and write CSV");
  FlagSet run_flags;
  run->add_option("--config", config_path, "INI-style config file")->check(CLI::ExistingFile);
  add_model_flags(run, run_flags);
  run_flags.add(run, "--process", "run.process", "storage | retrieval");
  run_flags.add(run, "--dissipation", "run.dissipation", "none | resummed | montecarlo | master");
  run_flags.add(run, "--t-end", "run.t_end", "final time");
  run_flags.add(run, "--stride", "run.stride", "output spacing");
  run_flags.add(run, "--seed", "run.seed", "Monte Carlo master seed");
  run_flags.add(run, "--n-traj", "run.n_traj", "Monte Carlo trajectories");
  run_flags.add(run, "--constant-level", "run.constant_level", "hold Omega_C at this level");
  run_flags.add(run, "--output,-o", "run.output", "output path or -");

  auto* sweep = app.add_subcommand("sweep", "final-state readouts over a parameter grid");
  FlagSet sweep_flags;
  std::string preset;
  std::string sweep_out = "-";
  sweep->add_option("--config", config_path, "INI-style config file")->check(CLI::ExistingFile);
  sweep->add_option("--preset", preset, "named grid: fig2 ... fig9");
  sweep->add_option("--output,-o", sweep_out, "output path or -");
  add_model_flags(sweep, sweep_flags);
  sweep_flags.add(sweep, "--processes", "sweep.process", "comma list of storage, retrieval");
  sweep_flags.add(sweep, "--g0-list", "sweep.g0", "comma list of g0 values");
  sweep_flags.add(sweep, "--gamma-list", "sweep.gamma", "comma list of Gamma values");
  sweep_flags.add(sweep, "--r-list", "sweep.r", "comma list of r values");
  sweep_flags.add(sweep, "--dissipation", "run.dissipation", "model used for Gamma > 0 cells");

  auto* table1 = app.add_subcommand("table1", "retrieval fidelity table against the closed form");
  std::string table_out = "table1.csv";
  table1->add_option("--output,-o", table_out, "CSV path");

  auto* figures = app.add_subcommand("figures", "curve CSVs for every figure panel");
  std::string which = "all";
  std::string out_dir = ".";
  figures->add_option("which", which, "fig2 ... fig9 or all");
  figures->add_option("--out-dir", out_dir, "destination directory");

  auto* validate = app.add_subcommand("validate", "numerical self-checks");
  h::ValidateOptions vopts;
  validate->add_option("--tolerance-scale", vopts.tolerance_scale, "multiply every tolerance")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? h::kExitOk : h::kExitUsage;
  }

  try {
    if (run->parsed()) {
      h::cmd_run(h::run_spec_from(merged(config_path, run_flags.given())));
    } else if (sweep->parsed()) {
      const h::Settings s = merged(config_path, sweep_flags.given());
      h::SweepSpec spec = h::sweep_spec_from(s);
      if (!preset.empty()) {
        // Explicit lists win over the preset's.
        const h::SweepSpec p = h::sweep_preset(preset);
        if (!s.count("sweep.process")) spec.processes = p.processes;
        if (!s.count("sweep.g0")) spec.g0 = p.g0;
        if (!s.count("sweep.gamma")) spec.gamma = p.gamma;
        if (!s.count("sweep.r")) spec.r = p.r;
      }
      h::cmd_sweep(spec, sweep_out);
    } else if (table1->parsed()) {
      h::cmd_table1(table_out, std::cout);
    } else if (figures->parsed()) {
      std::filesystem::create_directories(out_dir);
      for (const auto& name : h::cmd_figures(which, out_dir)) std::cout << name << '\n';
    } else if (validate->parsed()) {
      return h::cmd_validate(vopts, std::cout);
    }
  } catch (const h::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::kExitUsage;
  } catch (const lambda_sim::IntegrationError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return h::kExitNumerical;
  } catch (const lambda_sim::DegenerateNormalization& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return h::kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return h::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return h::kExitIo;
  }
  return h::kExitOk;
}

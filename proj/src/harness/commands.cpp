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

#include "lambda_sim/harness/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <map>
#include <sstream>

#include "lambda_sim/densitymatrix.hpp"
#include "lambda_sim/diagnostics.hpp"
#include "lambda_sim/dissipative.hpp"

namespace lambda_sim::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TrajectoryRecord mixed_record(const SystemParams& params, const ControlPulse& pulse,
                              const std::vector<double>& times, const std::vector<Mat3c>& rhos) {
  TrajectoryRecord rec;
  rec.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const double omega_c = pulse.amplitude(t);
    const Mat3c& rho = rhos[i];
    const Vec3c u1 = eigenframe(params, omega_c, t).u(0);
    rec.times.push_back(t);
    rec.omega_c.push_back(omega_c);
    rec.eigen.push_back(Vec3c::Constant(Complex(kNaN, kNaN)));
    rec.bare.push_back(Vec3c::Constant(Complex(kNaN, kNaN)));
    rec.phases.push_back(Vec3d::Constant(kNaN));
    rec.fidelity.push_back(std::sqrt(std::max(0.0, u1.dot(rho * u1).real())));
    rec.populations.push_back({rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real()});
    rec.norm.push_back(rho.trace().real());
  }
  return rec;
}

std::string fmt_fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

SweepRow sweep_cell(const RunSpec& cell) {
  const TrajectoryRecord rec = simulate(cell);
  const SteadyStateReadout ro = steady_state_readout(rec, cell.pulse());
  return {cell.process, cell.params.g0, cell.params.gamma, cell.params.r,
          ro.F_final,   ro.pops_final,  ro.saturation_drift};
}

struct Table1Reference {
  double r;
  double g0;
  double simulated;
  double berry;
};

// Printed steady-state retrieval fidelities (Gamma = 0) and closed-form values.
constexpr Table1Reference kTable1Reference[] = {
    {0.001, 0.05, 0.91, 0.9996}, {0.001, 0.1, 0.99, 1.0},   {0.001, 0.2, 0.999, 1.0},
    {0.01, 0.05, 0.425, 0.544},  {0.01, 0.1, 0.73, 0.957},  {0.01, 0.2, 0.96, 1.0},
    {0.1, 0.05, 0.14, 0.076},    {0.1, 0.1, 0.28, 0.269},   {0.1, 0.2, 0.53, 0.712},
    {0.2, 0.05, 0.11, 0.039},    {0.2, 0.1, 0.21, 0.145},   {0.2, 0.2, 0.40, 0.463},
    {0.5, 0.05, 0.08, 0.016},    {0.5, 0.1, 0.135, 0.061},  {0.5, 0.2, 0.28, 0.220},
    {0.8, 0.05, 0.06, 0.01},     {0.8, 0.1, 0.12, 0.038},   {0.8, 0.2, 0.24, 0.144},
};

struct FigureDef {
  Process process;
  double g0;
  bool populations;
};

const std::map<std::string, FigureDef>& figure_defs() {
  static const std::map<std::string, FigureDef> defs = {
      {"fig2", {Process::Storage, 0.05, false}},   {"fig3", {Process::Storage, 0.1, false}},
      {"fig4", {Process::Storage, 0.2, false}},    {"fig5", {Process::Storage, 0.1, true}},
      {"fig6", {Process::Retrieval, 0.05, false}}, {"fig7", {Process::Retrieval, 0.1, false}},
      {"fig8", {Process::Retrieval, 0.2, false}},  {"fig9", {Process::Retrieval, 0.1, true}},
  };
  return defs;
}

constexpr double kFigureRates[] = {0.1, 0.2, 0.5, 0.8};
constexpr double kFigureGammas[] = {0.0, 0.1, 0.5, 1.0};
constexpr double kFigureTEnd = 80.0;  // 8 / min(r)
constexpr std::size_t kFigurePoints = 2001;

TrajectoryRecord figure_curve(const FigureDef& def, double r, double gamma) {
  RunSpec spec;
  spec.process = def.process;
  spec.params.g0 = def.g0;
  spec.params.r = r;
  spec.params.gamma = gamma;
  spec.dissipation = gamma > 0.0 ? Dissipation::Resummed : Dissipation::None;
  spec.t_end = kFigureTEnd;
  spec.stride = kFigureTEnd / static_cast<double>(kFigurePoints - 1);
  return simulate(spec);
}

}  // namespace

TrajectoryRecord simulate(const RunSpec& spec) {
  const ControlPulse pulse = spec.pulse();
  const BareState init = dark_initial_state(spec.params, pulse);
  SolverOptions opts = spec.solver;
  opts.output_grid = spec.output_grid();
  const TimeSpan span{0.0, spec.t_end};

  switch (spec.dissipation) {
    case Dissipation::None: {
      EigenState v0;
      v0.amps = Vec3c(1.0, 0.0, 0.0);
      return evolve_eigenbasis(spec.params, pulse, span, v0, opts);
    }
    case Dissipation::Resummed:
      return evolve_dissipative(spec.params, pulse, span, init, opts);
    case Dissipation::Master: {
      const MasterTrajectory m =
          evolve_master(spec.params, pulse, span, DensityMatrix3::pure(init.amps), opts);
      return mixed_record(spec.params, pulse, m.times, m.rho);
    }
    case Dissipation::MonteCarlo: {
      const EnsembleResult e =
          monte_carlo_ensemble(spec.params, pulse, span, init, spec.n_traj, spec.seed, opts);
      return mixed_record(spec.params, pulse, e.times, e.mean);
    }
  }
  throw std::logic_error("unhandled dissipation mode");
}

Metadata run_metadata(const RunSpec& spec) {
  const auto& s = spec.solver;
  Metadata m = {
      {"tool", std::string("lambda_sim ") + kToolVersion},
      {"process", spec.constant_level ? "constant" : to_string(spec.process)},
      {"dissipation", to_string(spec.dissipation)},
      {"g0", format_number(spec.params.g0)},
      {"r", format_number(spec.params.r)},
      {"gamma", format_number(spec.params.gamma)},
      {"delta", format_number(spec.params.delta_c)},
      {"n", std::to_string(spec.params.n)},
      {"phi", format_number(spec.params.phi)},
      {"t_end", format_number(spec.t_end)},
      {"stride", format_number(spec.stride)},
      {"solver", s.method == SolverMethod::AdaptiveRK45 ? "adaptive" : "rk4"},
      {"rel_tol", format_number(s.rel_tol)},
      {"abs_tol", format_number(s.abs_tol)},
      {"max_step", format_number(s.max_step)},
  };
  if (spec.constant_level) m.push_back({"constant_level", format_number(*spec.constant_level)});
  if (spec.dissipation == Dissipation::MonteCarlo) {
    m.push_back({"seed", std::to_string(spec.seed)});
    m.push_back({"n_traj", std::to_string(spec.n_traj)});
  }
  return m;
}

std::string render_run(const RunSpec& spec) {
  std::ostringstream out;
  write_trajectory_csv(out, simulate(spec), run_metadata(spec));
  return out.str();
}

void cmd_run(const RunSpec& spec) { write_text(spec.output, render_run(spec)); }

std::vector<SweepRow> execute_sweep_serial(const SweepSpec& spec) {
  std::vector<SweepRow> rows;
  for (const RunSpec& c : spec.cells()) rows.push_back(sweep_cell(c));
  return rows;
}

std::vector<SweepRow> execute_sweep(const SweepSpec& spec) {
  const std::vector<RunSpec> cells = spec.cells();
  std::vector<SweepRow> rows(cells.size());
  const int n = static_cast<int>(cells.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    try {
      rows[i] = sweep_cell(cells[i]);
    } catch (...) {
#pragma omp critical(lambda_sim_sweep_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::string render_sweep(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  Metadata meta = run_metadata(spec.base);
  meta.erase(std::remove_if(meta.begin(), meta.end(),
                            [](const auto& kv) {
                              return kv.first == "g0" || kv.first == "r" || kv.first == "gamma" ||
                                     kv.first == "process" || kv.first == "t_end" ||
                                     kv.first == "stride" || kv.first == "dissipation";
                            }),
             meta.end());
  meta.push_back({"cells", std::to_string(rows.size())});
  meta.push_back({"readout", "t = 8/r"});
  write_metadata(out, meta);
  out << "process,g0,r,gamma,F_final,pa,pb,pc,drift\n";
  for (const SweepRow& row : rows) {
    out << to_string(row.process) << ',' << format_number(row.g0) << ',' << format_number(row.r)
        << ',' << format_number(row.gamma) << ',' << format_number(row.F_final);
    for (double p : row.pops) out << ',' << format_number(p);
    out << ',' << format_number(row.drift) << '\n';
  }
  return out.str();
}

void cmd_sweep(const SweepSpec& spec, const std::string& output) {
  write_text(output, render_sweep(spec, execute_sweep(spec)));
}

std::vector<Table1Cell> compute_table1(const SolverOptions& opts) {
  const int n = static_cast<int>(std::size(kTable1Reference));
  std::vector<Table1Cell> cells(n);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n; ++i) {
    try {
      const Table1Reference& ref = kTable1Reference[i];
      SystemParams p;
      p.g0 = ref.g0;
      p.r = ref.r;
      const ControlPulse pulse = ControlPulse::retrieval(ref.r);
      const double t_end = default_t_end(pulse);
      SolverOptions o = opts;
      o.output_grid = uniform_grid(0.0, t_end, 401);
      EigenState v0;
      v0.amps = Vec3c(1.0, 0.0, 0.0);
      const TrajectoryRecord rec = evolve_eigenbasis(p, pulse, {0.0, t_end}, v0, o);
      const SteadyStateReadout ro = steady_state_readout(rec, pulse);
      Table1Cell c{ref.r, ref.g0, ro.F_final, berry_retrieval_fidelity(ref.g0, ref.r),
                   ref.simulated, ref.berry, false};
      c.flagged = std::abs(c.simulated - c.reference) > 0.03;
      cells[i] = c;
    } catch (...) {
#pragma omp critical(lambda_sim_table_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return cells;
}

std::string render_table1_csv(const std::vector<Table1Cell>& cells) {
  std::ostringstream out;
  write_metadata(out, {{"tool", std::string("lambda_sim ") + kToolVersion},
                       {"process", "retrieval"},
                       {"gamma", format_number(0.0)},
                       {"readout", "t = 8/r"},
                       {"flag_threshold", format_number(0.03)}});
  out << "r,g0,F_sim,F_berry,F_ref,F_ref_berry,dev_sim,dev_berry,flag\n";
  for (const Table1Cell& c : cells) {
    out << format_number(c.r) << ',' << format_number(c.g0) << ',' << format_number(c.simulated)
        << ',' << format_number(c.berry) << ',' << format_number(c.reference) << ','
        << format_number(c.reference_berry) << ','
        << format_number(std::abs(c.simulated - c.reference)) << ','
        << format_number(std::abs(c.berry - c.reference_berry)) << ',' << (c.flagged ? 1 : 0)
        << '\n';
  }
  return out.str();
}

std::string render_table1_text(const std::vector<Table1Cell>& cells) {
  std::ostringstream out;
  out << "Steady-state retrieval fidelity, Gamma = 0 (sim / reference / superadiabatic)\n";
  out << "  r/O0   |      g0 = 0.05       |      g0 = 0.1        |      g0 = 0.2\n";
  for (std::size_t i = 0; i < cells.size(); i += 3) {
    out << "  " << fmt_fixed(cells[i].r, 3) << "  ";
    for (std::size_t j = i; j < i + 3 && j < cells.size(); ++j) {
      const Table1Cell& c = cells[j];
      out << "| " << fmt_fixed(c.simulated, 3) << ' ' << fmt_fixed(c.reference, 3) << ' '
          << fmt_fixed(c.berry, 4) << (c.flagged ? " *" : "  ") << ' ';
    }
    out << '\n';
  }
  int flagged = 0;
  for (const Table1Cell& c : cells) flagged += c.flagged ? 1 : 0;
  out << flagged << " of " << cells.size() << " cells deviate from the reference by more than 0.03\n";
  return out.str();
}

void cmd_table1(const std::string& csv_path, std::ostream& text_out) {
  const std::vector<Table1Cell> cells = compute_table1();
  write_text(csv_path, render_table1_csv(cells));
  text_out << render_table1_text(cells);
}

std::vector<std::string> figure_ids(const std::string& which) {
  if (which == "all") {
    std::vector<std::string> ids;
    for (const auto& [id, def] : figure_defs()) ids.push_back(id);
    return ids;
  }
  if (!figure_defs().count(which))
    throw UsageError("unknown figure id '" + which + "' (fig2..fig9|all)");
  return {which};
}

std::vector<PanelFile> render_figure(const std::string& id) {
  auto it = figure_defs().find(id);
  if (it == figure_defs().end()) throw UsageError("unknown figure id '" + id + "'");
  const FigureDef& def = it->second;

  const std::vector<double> gammas =
      def.populations ? std::vector<double>{0.0, 0.1}
                      : std::vector<double>(std::begin(kFigureGammas), std::end(kFigureGammas));
  const int n_r = static_cast<int>(std::size(kFigureRates));
  const int n_g = static_cast<int>(gammas.size());
  std::vector<TrajectoryRecord> curves(n_r * n_g);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < n_r * n_g; ++i) {
    try {
      curves[i] = figure_curve(def, kFigureRates[i % n_r], gammas[i / n_r]);
    } catch (...) {
#pragma omp critical(lambda_sim_figure_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  auto curve = [&](int gi, int ri) -> const TrajectoryRecord& { return curves[gi * n_r + ri]; };

  auto base_meta = [&]() {
    return Metadata{{"tool", std::string("lambda_sim ") + kToolVersion},
                    {"figure", id},
                    {"process", to_string(def.process)},
                    {"g0", format_number(def.g0)}};
  };

  std::vector<PanelFile> files;
  if (!def.populations) {
    const char panel_names[] = {'a', 'b', 'c', 'd'};
    for (int gi = 0; gi < n_g; ++gi) {
      std::ostringstream out;
      Metadata meta = base_meta();
      meta.push_back({"panel", std::string(1, panel_names[gi])});
      meta.push_back({"gamma", format_number(gammas[gi])});
      write_metadata(out, meta);
      out << "t";
      for (double r : kFigureRates) out << ",F_r" << short_number(r);
      out << '\n';
      const TrajectoryRecord& first = curve(gi, 0);
      for (std::size_t row = 0; row < first.size(); ++row) {
        out << format_number(first.times[row]);
        for (int ri = 0; ri < n_r; ++ri) out << ',' << format_number(curve(gi, ri).fidelity[row]);
        out << '\n';
      }
      files.push_back({id + "_" + panel_names[gi] + ".csv", out.str()});
    }
  } else {
    for (int ri = 0; ri < n_r; ++ri) {
      std::ostringstream out;
      Metadata meta = base_meta();
      meta.push_back({"panel", "r" + short_number(kFigureRates[ri])});
      meta.push_back({"r", format_number(kFigureRates[ri])});
      write_metadata(out, meta);
      out << "t";
      for (double g : gammas)
        for (const char* p : {"pa", "pb", "pc"}) out << ',' << p << "_G" << short_number(g);
      out << '\n';
      const TrajectoryRecord& first = curve(0, ri);
      for (std::size_t row = 0; row < first.size(); ++row) {
        out << format_number(first.times[row]);
        for (int gi = 0; gi < n_g; ++gi)
          for (double p : curve(gi, ri).populations[row]) out << ',' << format_number(p);
        out << '\n';
      }
      files.push_back({id + "_r" + short_number(kFigureRates[ri]) + ".csv", out.str()});
    }
  }
  return files;
}

std::vector<std::string> cmd_figures(const std::string& which, const std::string& out_dir) {
  const std::vector<std::string> ids = figure_ids(which);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + out_dir + ": " + ec.message());
  std::vector<std::string> written;
  for (const std::string& id : ids) {
    for (const PanelFile& f : render_figure(id)) {
      const std::string path = (std::filesystem::path(out_dir) / f.name).string();
      write_text(path, f.content);
      written.push_back(f.name);
    }
  }
  return written;
}

}  // namespace lambda_sim::harness

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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "lambda_sim/densitymatrix.hpp"
#include "lambda_sim/diagnostics.hpp"
#include "lambda_sim/dissipative.hpp"
#include "lambda_sim/harness/commands.hpp"

namespace lambda_sim::harness {

namespace {

struct Measured {
  double value;
  double tolerance;
};

std::string describe(const Measured& m) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "max error %.3e (tolerance %.1e)", m.value, m.tolerance);
  return buf;
}

SystemParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coupling(0.01, 1.0);
  std::uniform_real_distribution<double> detuning(-2.0, 2.0);
  std::uniform_real_distribution<double> phase(-3.0, 3.0);
  SystemParams p;
  p.g0 = coupling(rng);
  p.delta_s = p.delta_c = detuning(rng);
  p.phi = phase(rng);
  return p;
}

Measured eigen_residual() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> field(0.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const SystemParams p = random_params(rng);
    const double oc = field(rng);
    const EigenFrame f = eigenframe(p, oc, 0.0);
    const Mat3c h = hamiltonian_matrix(p, oc);
    for (int k = 0; k < 3; ++k)
      worst = std::max(worst, (h * f.u(k) - f.lambdas(k) * f.u(k)).norm());
  }
  return {worst, 1e-10};
}

Measured orthonormality() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> field(0.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const SystemParams p = random_params(rng);
    const EigenFrame f = eigenframe(p, field(rng), 0.0);
    const Mat3c gram = f.vectors.adjoint() * f.vectors;
    worst = std::max(worst, (gram - Mat3c::Identity()).cwiseAbs().maxCoeff());
  }
  return {worst, 1e-12};
}

Measured derivative_consistency() {
  const double h = 1e-5;
  double worst = 0.0;
  SystemParams p;
  p.g0 = 0.1;
  p.delta_s = p.delta_c = 0.3;
  for (const ControlPulse& pulse : {ControlPulse::storage(0.2), ControlPulse::retrieval(0.2)}) {
    for (double t : {0.5, 2.0, 5.0, 9.0}) {
      const double fd = (pulse.amplitude(t + h) - pulse.amplitude(t - h)) / (2 * h);
      const double an = pulse.derivative(t);
      worst = std::max(worst, std::abs(fd - an) / std::abs(an));
      const auto th = [&](double s) { return mixing_angles(p, pulse.amplitude(s)); };
      const AngleRates rates = angle_rates(p, pulse.amplitude(t), an);
      const double fd_theta = (th(t + h).theta - th(t - h).theta) / (2 * h);
      const double fd_psi = (th(t + h).psi - th(t - h).psi) / (2 * h);
      worst = std::max(worst, std::abs(fd_theta - rates.theta_dot) / std::abs(rates.theta_dot));
      worst = std::max(worst, std::abs(fd_psi - rates.psi_dot) / std::abs(rates.psi_dot));
    }
  }
  return {worst, 1e-6};
}

Measured gauge_phases() {
  const double h = 1e-6;
  SystemParams p;
  p.g0 = 0.2;
  p.delta_s = p.delta_c = 0.4;
  p.phi = 0.7;
  const ControlPulse pulse = ControlPulse::retrieval(0.3);
  double worst = 0.0;
  for (double t : {0.3, 1.0, 4.0}) {
    const EigenFrame a = eigenframe(p, pulse.amplitude(t - h), t - h);
    const EigenFrame b = eigenframe(p, pulse.amplitude(t + h), t + h);
    const EigenFrame f = eigenframe(p, pulse.amplitude(t), t);
    for (int k = 0; k < 3; ++k)
      worst = std::max(worst, std::abs(f.u(k).dot((b.u(k) - a.u(k)) / (2 * h))));
  }
  return {worst, 1e-8};
}

Measured oracle_equivalence() {
  double worst = 0.0;
  for (double g0 : {0.05, 0.2}) {
    for (double r : {0.1, 0.8}) {
      for (PulseKind kind : {PulseKind::Storage, PulseKind::Retrieval}) {
        SystemParams p;
        p.g0 = g0;
        p.r = r;
        const ControlPulse pulse = ControlPulse::for_process(kind, p);
        const double t_end = default_t_end(pulse);
        SolverOptions o;
        o.output_grid = uniform_grid(0.0, t_end, 201);
        EigenState v0;
        v0.amps = Vec3c(1.0, 0.0, 0.0);
        const auto eig = evolve_eigenbasis(p, pulse, {0.0, t_end}, v0, o);
        const auto bare = evolve_bare(p, pulse, {0.0, t_end}, dark_initial_state(p, pulse), o);
        for (std::size_t i = 0; i < eig.size(); ++i)
          worst = std::max(worst, (eig.bare[i] - bare.bare[i]).cwiseAbs().maxCoeff());
      }
    }
  }
  return {worst, 1e-6};
}

Measured unitarity() {
  double worst = 0.0;
  for (PulseKind kind : {PulseKind::Storage, PulseKind::Retrieval}) {
    SystemParams p;
    p.g0 = 0.1;
    p.r = 0.2;
    const ControlPulse pulse = ControlPulse::for_process(kind, p);
    const auto rec = evolve_bare(p, pulse, {0.0, default_t_end(pulse)}, dark_initial_state(p, pulse));
    for (double z : rec.norm) worst = std::max(worst, std::abs(z - 1.0));
  }
  return {worst, 1e-8};
}

Measured gamma_continuity() {
  SystemParams p;
  p.g0 = 0.1;
  p.r = 0.2;
  const ControlPulse pulse = ControlPulse::retrieval(p.r);
  const BareState init = dark_initial_state(p, pulse);
  SolverOptions o;
  o.output_grid = uniform_grid(0.0, default_t_end(pulse), 201);
  const auto ref = evolve_bare(p, pulse, {0.0, default_t_end(pulse)}, init, o);
  p.gamma = 1e-8;
  const auto dis = evolve_dissipative(p, pulse, {0.0, default_t_end(pulse)}, init, o);
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i)
    worst = std::max(worst, (ref.bare[i] - dis.bare[i]).cwiseAbs().maxCoeff());
  return {worst, 1e-6};
}

Measured quadrature_agreement() {
  SystemParams p;
  p.g0 = 0.1;
  p.r = 0.2;
  p.gamma = 0.5;
  const ControlPulse pulse = ControlPulse::retrieval(p.r);
  const BareState init = dark_initial_state(p, pulse);
  const double t = 3.0 / p.r;
  SolverOptions o;
  o.output_grid = {0.0, t};
  const auto rec = evolve_dissipative(p, pulse, {0.0, t}, init, o);
  const Vec3c phi_ode = rec.bare.back() * rec.norm.back();
  const DissipativeState q = quadrature_oracle(p, pulse, t, init, SolverOptions{}, 512);
  return {(phi_ode - q.phi_unnormalized).cwiseAbs().maxCoeff(), 1e-4};
}

Measured completeness() {
  SystemParams p;
  p.g0 = 0.1;
  p.r = 0.2;
  p.gamma = 0.1;
  const ControlPulse pulse = ControlPulse::storage(p.r);
  const auto rec = evolve_dissipative(p, pulse, {0.0, default_t_end(pulse)},
                                      dark_initial_state(p, pulse));
  double worst = 0.0;
  for (const Vec3c& w : eigen_coefficients(rec, p)) worst = std::max(worst, std::abs(w.squaredNorm() - 1.0));
  return {worst, 1e-10};
}

Measured master_trace_positivity() {
  SystemParams p;
  p.g0 = 0.1;
  p.r = 0.2;
  p.gamma = 0.5;
  const ControlPulse pulse = ControlPulse::retrieval(p.r);
  const auto m = evolve_master(p, pulse, {0.0, default_t_end(pulse)},
                               DensityMatrix3::pure(dark_initial_state(p, pulse).amps));
  double worst = 0.0;
  for (const Mat3c& rho : m.rho) {
    worst = std::max(worst, std::abs(rho.trace().real() - 1.0));
    worst = std::max(worst, -DensityMatrix3{rho}.min_eigenvalue());
  }
  return {worst, 1e-8};
}

Measured berry_closed_form() {
  const double cells[][3] = {{0.05, 0.01, 0.544}, {0.1, 0.1, 0.269}, {0.2, 0.2, 0.463},
                             {0.1, 0.5, 0.061},   {0.2, 0.8, 0.144}, {0.05, 0.001, 0.9996}};
  double worst = 0.0;
  for (const auto& c : cells) worst = std::max(worst, std::abs(berry_retrieval_fidelity(c[0], c[1]) - c[2]));
  return {worst, 1e-3};
}

Measured oreg_resonant() {
  double worst = 0.0;
  SystemParams p;
  for (double g : {0.05, 0.1, 0.2, 0.7})
    for (double oc : {0.0, 0.01, 0.5, 1.0, 2.0}) {
      p.g0 = g;
      worst = std::max(worst, std::abs(oreg_d1(p, oc)));
    }
  return {worst, 1e-14};
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidateOptions& opts) {
  const std::vector<std::pair<std::string, std::function<Measured()>>> checks = {
      {"eigen_residual", eigen_residual},
      {"orthonormality", orthonormality},
      {"derivative_consistency", derivative_consistency},
      {"gauge_phases", gauge_phases},
      {"oracle_equivalence", oracle_equivalence},
      {"unitarity", unitarity},
      {"gamma_continuity", gamma_continuity},
      {"quadrature_agreement", quadrature_agreement},
      {"eigen_completeness", completeness},
      {"master_trace_positivity", master_trace_positivity},
      {"berry_closed_form", berry_closed_form},
      {"oreg_d1_resonant", oreg_resonant},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : checks) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult r{name, false, {}, 0.0};
    try {
      Measured m = fn();
      m.tolerance *= opts.tolerance_scale;
      r.passed = m.value <= m.tolerance;
      r.detail = describe(m);
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(r));
  }
  return out;
}

int cmd_validate(const ValidateOptions& opts, std::ostream& out) {
  const std::vector<CheckResult> results = run_validation(opts);
  int failed = 0;
  for (const CheckResult& r : results) {
    char time_buf[32];
    std::snprintf(time_buf, sizeof time_buf, "%.3fs", r.seconds);
    out << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "  [" << time_buf << "]\n";
    failed += r.passed ? 0 : 1;
  }
  out << (results.size() - failed) << "/" << results.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitValidation;
}

}  // namespace lambda_sim::harness

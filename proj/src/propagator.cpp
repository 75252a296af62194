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

#include "lambda_sim/propagator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lambda_sim {

namespace {

using EigenOdeState = Eigen::Matrix<double, 9, 1>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

EigenOdeState pack(const EigenState& s) {
  EigenOdeState y;
  for (int k = 0; k < 3; ++k) {
    y(2 * k) = s.amps(k).real();
    y(2 * k + 1) = s.amps(k).imag();
    y(6 + k) = s.phases(k);
  }
  return y;
}

EigenState unpack(const EigenOdeState& y) {
  EigenState s;
  for (int k = 0; k < 3; ++k) {
    s.amps(k) = Complex(y(2 * k), y(2 * k + 1));
    s.phases(k) = y(6 + k);
  }
  return s;
}

}  // namespace

void SolverOptions::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw std::invalid_argument("tolerances must be > 0");
  if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be > 0");
  for (std::size_t i = 1; i < output_grid.size(); ++i)
    if (!(output_grid[i] > output_grid[i - 1]))
      throw std::invalid_argument("output grid must be strictly increasing");
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t n_points) {
  if (n_points < 2) return {t1};
  std::vector<double> g(n_points);
  const double h = (t1 - t0) / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) g[i] = t0 + h * static_cast<double>(i);
  g.back() = t1;
  return g;
}

void TrajectoryRecord::reserve(std::size_t n) {
  times.reserve(n);
  omega_c.reserve(n);
  eigen.reserve(n);
  bare.reserve(n);
  phases.reserve(n);
  fidelity.reserve(n);
  populations.reserve(n);
  norm.reserve(n);
}

double default_t_end(const ControlPulse& pulse) {
  if (pulse.kind() == PulseKind::Constant) return 10.0;
  return 8.0 / pulse.rate();
}

std::vector<double> resolve_grid(const TimeSpan& span, const SolverOptions& opts) {
  if (!(span.t1 >= span.t0)) throw std::domain_error("time span end precedes start");
  if (span.t0 < 0.0) throw std::domain_error("time span must start at t >= 0");
  if (!opts.output_grid.empty()) {
    opts.validate();
    if (opts.output_grid.front() < span.t0 || opts.output_grid.back() > span.t1)
      throw std::domain_error("output grid lies outside the time span");
    return opts.output_grid;
  }
  return uniform_grid(span.t0, span.t1, 2001);
}

void append_pure_row(TrajectoryRecord& rec, const SystemParams& params,
                     const ControlPulse& pulse, double t, const Vec3c& bare,
                     const Vec3d& phases, double norm) {
  const double omega_c = pulse.amplitude(t);
  rec.times.push_back(t);
  rec.omega_c.push_back(omega_c);
  rec.bare.push_back(bare);
  rec.phases.push_back(phases);
  rec.norm.push_back(norm);
  rec.populations.push_back({std::norm(bare(0)), std::norm(bare(1)), std::norm(bare(2))});
  if (params.two_photon_resonant()) {
    const EigenFrame f = eigenframe(params, omega_c, t);
    rec.eigen.push_back(bare_to_eigen(f, BareState{bare}, phases).amps);
    rec.fidelity.push_back(std::abs(f.u(0).dot(bare)));
  } else {
    rec.eigen.push_back(Vec3c::Constant(Complex(kNaN, kNaN)));
    rec.fidelity.push_back(kNaN);
  }
}

TrajectoryRecord evolve_eigenbasis(const SystemParams& params, const ControlPulse& pulse,
                                   const TimeSpan& span, const EigenState& init,
                                   const SolverOptions& opts) {
  params.validate();
  opts.validate();
  const std::vector<double> grid = resolve_grid(span, opts);

  const double phi = params.phi;
  auto rhs = [&](double t, const EigenOdeState& y) {
    const double omega_c = pulse.amplitude(t);
    const double domega = pulse.derivative(t);
    const EigenFrame f = eigenframe(params, omega_c, t);
    const AngleRates rates = angle_rates(params, omega_c, domega);
    const Mat3c c = nonadiabatic_couplings(f, rates.theta_dot, rates.psi_dot, phi);
    Vec3c v;
    for (int k = 0; k < 3; ++k) v(k) = Complex(y(2 * k), y(2 * k + 1));
    EigenOdeState dy;
    for (int m = 0; m < 3; ++m) {
      Complex acc = 0.0;
      for (int k = 0; k < 3; ++k) {
        if (k == m) continue;
        acc -= v(k) * c(m, k) * std::polar(1.0, -(y(6 + k) - y(6 + m)));
      }
      dy(2 * m) = acc.real();
      dy(2 * m + 1) = acc.imag();
    }
    dy.tail<3>() = f.lambdas;
    return dy;
  };

  TrajectoryRecord rec;
  rec.reserve(grid.size());
  EigenOdeState y = pack(init);
  integrate(rhs, y, span.t0, grid, opts, [&](double t, const EigenOdeState& s) {
    const EigenState st = unpack(s);
    const double omega_c = pulse.amplitude(t);
    const EigenFrame f = eigenframe(params, omega_c, t);
    const Vec3c bare = eigen_to_bare(f, st).amps;
    rec.times.push_back(t);
    rec.omega_c.push_back(omega_c);
    rec.eigen.push_back(st.amps);
    rec.bare.push_back(bare);
    rec.phases.push_back(st.phases);
    rec.fidelity.push_back(std::abs(f.u(0).dot(bare)));
    rec.populations.push_back({std::norm(bare(0)), std::norm(bare(1)), std::norm(bare(2))});
    rec.norm.push_back(st.amps.norm());
  });
  return rec;
}

std::vector<Vec3d> accumulated_phases(const SystemParams& params, const ControlPulse& pulse,
                                      std::span<const double> grid, const SolverOptions& opts) {
  std::vector<Vec3d> out;
  out.reserve(grid.size());
  if (!params.two_photon_resonant()) {
    out.assign(grid.size(), Vec3d::Constant(kNaN));
    return out;
  }
  SolverOptions o = opts;
  o.output_grid.clear();
  Vec3d x = Vec3d::Zero();
  auto rhs = [&](double t, const Vec3d&) { return eigenvalues_at(params, pulse, t); };
  integrate(rhs, x, 0.0, grid, o, [&](double, const Vec3d& s) { out.push_back(s); });
  return out;
}

TrajectoryRecord evolve_bare(const SystemParams& params, const ControlPulse& pulse,
                             const TimeSpan& span, const BareState& init,
                             const SolverOptions& opts) {
  params.validate();
  opts.validate();
  const std::vector<double> grid = resolve_grid(span, opts);

  auto rhs = [&](double t, const Vec3c& x) -> Vec3c {
    return -kI * (hamiltonian_matrix(params, pulse.amplitude(t)) * x);
  };

  std::vector<Vec3d> phases = accumulated_phases(params, pulse, grid, opts);

  TrajectoryRecord rec;
  rec.reserve(grid.size());
  Vec3c x = init.amps;
  std::size_t i = 0;
  integrate(rhs, x, span.t0, grid, opts, [&](double t, const Vec3c& s) {
    append_pure_row(rec, params, pulse, t, s, phases[i++], s.norm());
  });
  return rec;
}

BareState propagate_between(const SystemParams& params, const ControlPulse& pulse, double t1,
                            double t2, const BareState& init, const SolverOptions& opts) {
  if (t1 < 0.0) throw std::domain_error("propagate_between needs t1 >= 0");
  if (t2 < t1) throw std::domain_error("propagate_between needs t2 >= t1");
  if (t2 == t1) return init;
  auto rhs = [&](double t, const Vec3c& x) -> Vec3c {
    return -kI * (hamiltonian_matrix(params, pulse.amplitude(t)) * x);
  };
  Vec3c x = init.amps;
  const double end[1] = {t2};
  integrate(rhs, x, t1, std::span<const double>(end), opts, [](double, const Vec3c&) {});
  return BareState{x};
}

}  // namespace lambda_sim

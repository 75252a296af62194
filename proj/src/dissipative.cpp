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

#include "lambda_sim/dissipative.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lambda_sim {

namespace {

constexpr double kMinNorm = 1e-14;

struct QuadratureNodes {
  std::vector<double> times;
  std::vector<double> weights;
};

QuadratureNodes trapezoid_nodes(double t, int n_quad) {
  QuadratureNodes q;
  q.times.resize(n_quad);
  q.weights.resize(n_quad);
  const double h = t / static_cast<double>(n_quad - 1);
  for (int i = 0; i < n_quad; ++i) {
    q.times[i] = (i == n_quad - 1) ? t : h * i;
    q.weights[i] = (i == 0 || i == n_quad - 1) ? 0.5 * h : h;
  }
  return q;
}

// Integrand of the collapse term at node t1, already weighted.
Vec3c collapse_term(const SystemParams& params, const ControlPulse& pulse, double t, double t1,
                    double weight, const SolverOptions& opts) {
  const double g = params.gamma;
  const double kernel = (1.0 - std::exp(-g * t1)) * std::exp(-g * (t - t1));
  if (kernel == 0.0) return Vec3c::Zero();
  const BareState moved = propagate_between(params, pulse, t1, t, BareState{collapse_source()}, opts);
  return (weight * kernel) * moved.amps;
}

DissipativeState assemble(const SystemParams& params, const ControlPulse& pulse, double t,
                          const BareState& init, const SolverOptions& opts,
                          const std::vector<Vec3c>& terms) {
  Vec3c integral = Vec3c::Zero();
  for (const Vec3c& v : terms) integral += v;
  const BareState coherent = propagate_between(params, pulse, 0.0, t, init, opts);
  DissipativeState s;
  s.t = t;
  s.phi_unnormalized = std::exp(-params.gamma * t) * coherent.amps + 0.5 * params.gamma * integral;
  s.Z = s.phi_unnormalized.norm();
  return s;
}

void check_quadrature_args(double t, int n_quad) {
  if (n_quad < 16) throw std::invalid_argument("quadrature oracle needs n_quad >= 16");
  if (t < 0.0) throw std::domain_error("quadrature oracle needs t >= 0");
}

}  // namespace

Vec3c collapse_source() { return Vec3c(0.0, 1.0, 1.0); }

TrajectoryRecord evolve_dissipative(const SystemParams& params, const ControlPulse& pulse,
                                    const TimeSpan& span, const BareState& init,
                                    const SolverOptions& opts) {
  params.validate();
  opts.validate();
  if (span.t0 != 0.0) throw std::domain_error("dissipative evolution starts at t = 0");
  const std::vector<double> grid = resolve_grid(span, opts);
  const double g = params.gamma;
  const Vec3c source = collapse_source();

  auto rhs = [&](double t, const Vec3c& x) -> Vec3c {
    Vec3c d = -kI * (hamiltonian_matrix(params, pulse.amplitude(t)) * x) - g * x;
    if (g != 0.0) d += (0.5 * g * (1.0 - std::exp(-g * t))) * source;
    return d;
  };

  const std::vector<Vec3d> phases = accumulated_phases(params, pulse, grid, opts);

  TrajectoryRecord rec;
  rec.reserve(grid.size());
  Vec3c x = init.amps;
  std::size_t i = 0;
  integrate(rhs, x, span.t0, grid, opts, [&](double t, const Vec3c& phi) {
    const double z = phi.norm();
    if (z < kMinNorm)
      throw DegenerateNormalization("normalization Z(t) vanished at t = " + std::to_string(t));
    append_pure_row(rec, params, pulse, t, phi / z, phases[i++], z);
  });
  return rec;
}

DissipativeState quadrature_oracle_serial(const SystemParams& params, const ControlPulse& pulse,
                                          double t, const BareState& init,
                                          const SolverOptions& opts, int n_quad) {
  check_quadrature_args(t, n_quad);
  const QuadratureNodes q = trapezoid_nodes(t, n_quad);
  std::vector<Vec3c> terms(n_quad);
  for (int i = 0; i < n_quad; ++i)
    terms[i] = collapse_term(params, pulse, t, q.times[i], q.weights[i], opts);
  return assemble(params, pulse, t, init, opts, terms);
}

DissipativeState quadrature_oracle(const SystemParams& params, const ControlPulse& pulse, double t,
                                   const BareState& init, const SolverOptions& opts, int n_quad) {
  check_quadrature_args(t, n_quad);
  const QuadratureNodes q = trapezoid_nodes(t, n_quad);
  std::vector<Vec3c> terms(n_quad);
#pragma omp parallel for schedule(dynamic, 8)
  for (int i = 0; i < n_quad; ++i)
    terms[i] = collapse_term(params, pulse, t, q.times[i], q.weights[i], opts);
  // ordered reduction in assemble()
  return assemble(params, pulse, t, init, opts, terms);
}

std::vector<Vec3c> eigen_coefficients(const TrajectoryRecord& traj,
                                      const std::vector<EigenFrame>& frames) {
  if (frames.size() != traj.size())
    throw std::invalid_argument("one eigenframe per trajectory row is required");
  std::vector<Vec3c> w(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    w[i] = bare_to_eigen(frames[i], BareState{traj.bare[i]}, traj.phases[i]).amps;
  return w;
}

std::vector<Vec3c> eigen_coefficients(const TrajectoryRecord& traj, const SystemParams& params) {
  std::vector<EigenFrame> frames;
  frames.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    frames.push_back(eigenframe(params, traj.omega_c[i], traj.times[i]));
  return eigen_coefficients(traj, frames);
}

double poisson_weight(int l, double t, double gamma) {
  if (l < 0) throw std::domain_error("collapse count must be >= 0");
  if (t < 0.0 || gamma < 0.0) throw std::domain_error("poisson weight needs t, gamma >= 0");
  const double mu = gamma * t;
  if (mu == 0.0) return l == 0 ? 1.0 : 0.0;
  return std::exp(l * std::log(mu) - std::lgamma(l + 1.0) - mu);
}

}  // namespace lambda_sim

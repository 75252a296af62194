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

#include "lambda_sim/densitymatrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "lambda_sim/dissipative.hpp"

namespace lambda_sim {

namespace {

constexpr int kBlockSize = 256;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Mat3c reset_target() {
  Mat3c m = Mat3c::Zero();
  m(kB, kB) = 0.5;
  m(kC, kC) = 0.5;
  return m;
}

struct BlockSums {
  std::vector<Mat3c> sum;
  std::vector<Mat3c> sum_sq;  // real^2 in .real(), imag^2 in .imag()
};

BlockSums run_block(const SystemParams& params, const ControlPulse& pulse,
                    std::span<const double> grid, const BareState& init, int first, int last,
                    std::uint64_t seed, const SolverOptions& opts) {
  BlockSums b;
  b.sum.assign(grid.size(), Mat3c::Zero());
  b.sum_sq.assign(grid.size(), Mat3c::Zero());
  for (int n = first; n < last; ++n) {
    const JumpRecord jumps =
        sample_jumps(seed, static_cast<std::uint64_t>(n), params.gamma, grid.back());
    const std::vector<Vec3c> states = run_jump_trajectory(params, pulse, grid, init, jumps, opts);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Mat3c rho = states[i] * states[i].adjoint();
      b.sum[i] += rho;
      const Eigen::Matrix3d re = rho.real();
      const Eigen::Matrix3d im = rho.imag();
      b.sum_sq[i].real() += re.cwiseProduct(re);
      b.sum_sq[i].imag() += im.cwiseProduct(im);
    }
  }
  return b;
}

EnsembleResult reduce_blocks(std::span<const double> grid, const std::vector<BlockSums>& blocks,
                             int n_traj) {
  EnsembleResult out;
  out.times.assign(grid.begin(), grid.end());
  out.n_traj = n_traj;
  out.mean.assign(grid.size(), Mat3c::Zero());
  out.std_error.assign(grid.size(), Mat3c::Zero());
  const double n = static_cast<double>(n_traj);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Mat3c s = Mat3c::Zero();
    Mat3c sq = Mat3c::Zero();
    for (const BlockSums& b : blocks) {
      s += b.sum[i];
      sq += b.sum_sq[i];
    }
    const Mat3c mean = s / n;
    Eigen::Matrix3d var_re =
        (sq.real() - n * mean.real().cwiseProduct(mean.real())) / std::max(1.0, n - 1.0);
    Eigen::Matrix3d var_im =
        (sq.imag() - n * mean.imag().cwiseProduct(mean.imag())) / std::max(1.0, n - 1.0);
    var_re = var_re.cwiseMax(0.0);
    var_im = var_im.cwiseMax(0.0);
    out.mean[i] = mean;
    out.std_error[i].real() = (var_re / n).cwiseSqrt();
    out.std_error[i].imag() = (var_im / n).cwiseSqrt();
  }
  return out;
}

void check_ensemble_args(const TimeSpan& span, int n_traj) {
  if (n_traj < 1) throw std::invalid_argument("n_traj must be positive");
  if (span.t0 != 0.0) throw std::domain_error("ensemble runs start at t = 0");
}

}  // namespace

DensityMatrix3 DensityMatrix3::pure(const Vec3c& psi) { return {psi * psi.adjoint()}; }

double DensityMatrix3::min_eigenvalue() const {
  const Mat3c h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat3c> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix3::validate() const {
  if (!rho.allFinite()) throw std::domain_error("density matrix has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::domain_error("density matrix is not Hermitian");
  if (std::abs(trace() - 1.0) > 1e-8) throw std::domain_error("density matrix trace is not 1");
  if (min_eigenvalue() < -1e-10) throw std::domain_error("density matrix is not positive");
}

MasterTrajectory evolve_master(const SystemParams& params, const ControlPulse& pulse,
                               const TimeSpan& span, const DensityMatrix3& rho0,
                               const SolverOptions& opts) {
  params.validate();
  opts.validate();
  rho0.validate();
  const std::vector<double> grid = resolve_grid(span, opts);
  const double g = params.gamma;
  const Mat3c target = reset_target();

  auto rhs = [&](double t, const Mat3c& rho) -> Mat3c {
    const Mat3c h = hamiltonian_matrix(params, pulse.amplitude(t));
    Mat3c d = -kI * (h * rho - rho * h);
    if (g != 0.0) d += g * (rho.trace() * target - rho);
    return d;
  };

  MasterTrajectory out;
  out.times.reserve(grid.size());
  out.rho.reserve(grid.size());
  Mat3c rho = rho0.rho;
  integrate(rhs, rho, span.t0, grid, opts, [&](double t, const Mat3c& m) {
    out.times.push_back(t);
    out.rho.push_back(m);
  });
  return out;
}

JumpRecord sample_jumps(std::uint64_t master_seed, std::uint64_t index, double gamma,
                        double t_end) {
  JumpRecord rec;
  rec.seed = splitmix64(master_seed ^ splitmix64(index));
  if (!(gamma > 0.0)) return rec;
  std::mt19937_64 rng(rec.seed);
  std::exponential_distribution<double> wait(gamma);
  std::bernoulli_distribution coin(0.5);
  double t = 0.0;
  while (true) {
    t += wait(rng);
    if (t > t_end) break;
    rec.times.push_back(t);
    rec.targets.push_back(coin(rng) ? kB : kC);
  }
  return rec;
}

std::vector<Vec3c> run_jump_trajectory(const SystemParams& params, const ControlPulse& pulse,
                                       std::span<const double> grid, const BareState& init,
                                       const JumpRecord& jumps, const SolverOptions& opts) {
  auto rhs = [&](double t, const Vec3c& x) -> Vec3c {
    return -kI * (hamiltonian_matrix(params, pulse.amplitude(t)) * x);
  };

  std::vector<Vec3c> out(grid.size());
  Vec3c psi = init.amps;
  double tc = 0.0;
  std::size_t gi = 0;
  while (gi < grid.size() && grid[gi] <= tc) out[gi++] = psi / psi.norm();

  std::vector<double> targets;
  for (std::size_t j = 0; j <= jumps.times.size() && gi < grid.size(); ++j) {
    const bool is_jump = j < jumps.times.size();
    const double seg_end = is_jump ? jumps.times[j] : grid.back();
    targets.clear();
    const std::size_t first = gi;
    while (gi < grid.size() && grid[gi] <= seg_end) targets.push_back(grid[gi++]);
    if (targets.empty() || targets.back() < seg_end) targets.push_back(seg_end);
    std::size_t k = first;
    integrate(rhs, psi, tc, targets, opts, [&](double t, const Vec3c& s) {
      if (k < gi && grid[k] == t) out[k++] = s / s.norm();
    });
    tc = seg_end;
    if (is_jump) psi = Vec3c::Unit(jumps.targets[j]);
  }
  return out;
}

EnsembleResult monte_carlo_ensemble_serial(const SystemParams& params, const ControlPulse& pulse,
                                           const TimeSpan& span, const BareState& init,
                                           int n_traj, std::uint64_t seed,
                                           const SolverOptions& opts) {
  params.validate();
  check_ensemble_args(span, n_traj);
  const std::vector<double> grid = resolve_grid(span, opts);
  const int n_blocks = (n_traj + kBlockSize - 1) / kBlockSize;
  std::vector<BlockSums> blocks(n_blocks);
  for (int b = 0; b < n_blocks; ++b)
    blocks[b] = run_block(params, pulse, grid, init, b * kBlockSize,
                          std::min(n_traj, (b + 1) * kBlockSize), seed, opts);
  return reduce_blocks(grid, blocks, n_traj);
}

EnsembleResult monte_carlo_ensemble(const SystemParams& params, const ControlPulse& pulse,
                                    const TimeSpan& span, const BareState& init, int n_traj,
                                    std::uint64_t seed, const SolverOptions& opts) {
  params.validate();
  check_ensemble_args(span, n_traj);
  const std::vector<double> grid = resolve_grid(span, opts);
  const int n_blocks = (n_traj + kBlockSize - 1) / kBlockSize;
  std::vector<BlockSums> blocks(n_blocks);
#pragma omp parallel for schedule(dynamic, 1)
  for (int b = 0; b < n_blocks; ++b)
    blocks[b] = run_block(params, pulse, grid, init, b * kBlockSize,
                          std::min(n_traj, (b + 1) * kBlockSize), seed, opts);
  return reduce_blocks(grid, blocks, n_traj);
}

double trace_distance(const Mat3c& a, const Mat3c& b) {
  const Mat3c d = a - b;
  Eigen::SelfAdjointEigenSolver<Mat3c> es(0.5 * (d + d.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DiscrepancyReport model_discrepancy(const SystemParams& params, const ControlPulse& pulse,
                                    const TimeSpan& span, const BareState& init,
                                    const SolverOptions& opts) {
  SolverOptions o = opts;
  o.output_grid = resolve_grid(span, opts);
  const TrajectoryRecord resummed = evolve_dissipative(params, pulse, span, init, o);
  const MasterTrajectory master =
      evolve_master(params, pulse, span, DensityMatrix3::pure(init.amps), o);

  DiscrepancyReport rep;
  rep.times = o.output_grid;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const Vec3c& psi = resummed.bare[i];
    const double td = trace_distance(psi * psi.adjoint(), master.rho[i]);
    const Vec3c u1 = eigenframe(params, resummed.omega_c[i], rep.times[i]).u(0);
    const double f_master = std::sqrt(std::max(0.0, u1.dot(master.rho[i] * u1).real()));
    const double df = resummed.fidelity[i] - f_master;
    rep.trace_distance.push_back(td);
    rep.fidelity_difference.push_back(df);
    rep.max_trace_distance = std::max(rep.max_trace_distance, td);
    rep.max_fidelity_difference = std::max(rep.max_fidelity_difference, std::abs(df));
  }
  rep.readout_trace_distance = rep.trace_distance.back();
  rep.readout_fidelity_difference = rep.fidelity_difference.back();
  return rep;
}

std::vector<DiscrepancyScanRow> discrepancy_scan(SystemParams params,
                                                 std::span<const double> gammas,
                                                 const SolverOptions& opts) {
  std::vector<DiscrepancyScanRow> rows;
  for (PulseKind kind : {PulseKind::Storage, PulseKind::Retrieval}) {
    for (double g : gammas) {
      params.gamma = g;
      const ControlPulse pulse = ControlPulse::for_process(kind, params);
      const BareState init = dark_initial_state(params, pulse);
      SolverOptions o = opts;
      o.output_grid = uniform_grid(0.0, default_t_end(pulse), 401);
      const DiscrepancyReport rep =
          model_discrepancy(params, pulse, {0.0, default_t_end(pulse)}, init, o);
      rows.push_back({kind, g, rep.max_trace_distance, rep.readout_trace_distance});
    }
  }
  return rows;
}

}  // namespace lambda_sim

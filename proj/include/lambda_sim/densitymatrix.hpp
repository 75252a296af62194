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
#include <vector>

#include "lambda_sim/propagator.hpp"

namespace lambda_sim {

/// 3x3 density matrix in the bare basis (a, b, c).
struct DensityMatrix3 {
  Mat3c rho = Mat3c::Zero();

  static DensityMatrix3 pure(const Vec3c& psi);
  double trace() const { return rho.trace().real(); }
  double min_eigenvalue() const;
  /// Throws std::domain_error unless Hermitian, unit trace and positive.
  void validate() const;
};

struct MasterTrajectory {
  std::vector<double> times;
  std::vector<Mat3c> rho;
};

/// Reset-channel master equation
///   drho/dt = -i[H, rho] + Gamma ( tr(rho) (|b><b| + |c><c|)/2 - rho ).
MasterTrajectory evolve_master(const SystemParams& params, const ControlPulse& pulse,
                               const TimeSpan& span, const DensityMatrix3& rho0,
                               const SolverOptions& opts = {});

/// Collapse history of one Monte Carlo trajectory.
struct JumpRecord {
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<int> targets;  // kB or kC
};

/// Exponential inter-arrival times at rate gamma on [0, t_end], each followed
/// by a fair coin between |b> and |c>. The stream is a pure function of
/// (master_seed, index).
JumpRecord sample_jumps(std::uint64_t master_seed, std::uint64_t index, double gamma, double t_end);

/// Unitary evolution interrupted by the jumps of `jumps`; returns the
/// normalized state at every grid time.
std::vector<Vec3c> run_jump_trajectory(const SystemParams& params, const ControlPulse& pulse,
                                       std::span<const double> grid, const BareState& init,
                                       const JumpRecord& jumps, const SolverOptions& opts);

struct EnsembleResult {
  std::vector<double> times;
  std::vector<Mat3c> mean;
  /// Standard error of the real parts in .real(), of the imaginary parts in .imag().
  std::vector<Mat3c> std_error;
  int n_traj = 0;
};

/// Trajectory average of |Psi><Psi|. Trajectories run on the OpenMP pool in
/// fixed blocks; block sums are reduced in index order so the result does not
/// depend on the worker count.
EnsembleResult monte_carlo_ensemble(const SystemParams& params, const ControlPulse& pulse,
                                    const TimeSpan& span, const BareState& init, int n_traj,
                                    std::uint64_t seed, const SolverOptions& opts = {});

/// Single-threaded reference; bit-identical to monte_carlo_ensemble.
EnsembleResult monte_carlo_ensemble_serial(const SystemParams& params, const ControlPulse& pulse,
                                           const TimeSpan& span, const BareState& init,
                                           int n_traj, std::uint64_t seed,
                                           const SolverOptions& opts = {});

/// 0.5 * sum |eig(a - b)|.
double trace_distance(const Mat3c& a, const Mat3c& b);

struct DiscrepancyReport {
  std::vector<double> times;
  std::vector<double> trace_distance;
  std::vector<double> fidelity_difference;  // F_resummed - F_master
  double max_trace_distance = 0.0;
  double max_fidelity_difference = 0.0;
  double readout_trace_distance = 0.0;
  double readout_fidelity_difference = 0.0;
};

/// Compares the resummed pure state |Psi><Psi| against the master equation
/// started from the same initial state.
DiscrepancyReport model_discrepancy(const SystemParams& params, const ControlPulse& pulse,
                                    const TimeSpan& span, const BareState& init,
                                    const SolverOptions& opts = {});

struct DiscrepancyScanRow {
  PulseKind process;
  double gamma;
  double max_trace_distance;
  double readout_trace_distance;
};

/// Max discrepancy over the small-Gamma grid for storage and retrieval.
std::vector<DiscrepancyScanRow> discrepancy_scan(SystemParams params,
                                                 std::span<const double> gammas,
                                                 const SolverOptions& opts = {});

}  // namespace lambda_sim

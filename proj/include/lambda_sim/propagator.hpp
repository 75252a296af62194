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
#include <cstddef>
#include <vector>

#include "lambda_sim/model.hpp"
#include "lambda_sim/ode.hpp"

namespace lambda_sim {

/// Time series of one run. All columns have the same length as `times`.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> omega_c;
  std::vector<Vec3c> eigen;  // V_k(t) or W_k(t)
  std::vector<Vec3c> bare;   // normalized bare amplitudes
  std::vector<Vec3d> phases; // X_k(t)
  std::vector<double> fidelity;
  std::vector<std::array<double, 3>> populations;
  std::vector<double> norm;  // Z(t); 1 for unitary runs

  std::size_t size() const { return times.size(); }
  void reserve(std::size_t n);
};

struct TimeSpan {
  double t0 = 0.0;
  double t1 = 0.0;
};

/// Default readout time 8/r, after which the tanh pulses are saturated.
double default_t_end(const ControlPulse& pulse);

/// Output grid from opts.output_grid, or 2001 uniform points over the span.
std::vector<double> resolve_grid(const TimeSpan& span, const SolverOptions& opts);

/// Eigenbasis coefficient equations co-integrated with the phase integrals.
TrajectoryRecord evolve_eigenbasis(const SystemParams& params, const ControlPulse& pulse,
                                   const TimeSpan& span, const EigenState& init,
                                   const SolverOptions& opts = {});

/// Direct i dX/dt = H(t) X integration. Accepts delta_s != delta_c; eigen
/// columns and fidelity are NaN off two-photon resonance.
TrajectoryRecord evolve_bare(const SystemParams& params, const ControlPulse& pulse,
                             const TimeSpan& span, const BareState& init,
                             const SolverOptions& opts = {});

/// Applies U(t2, t1) with H evaluated on the absolute pulse clock.
BareState propagate_between(const SystemParams& params, const ControlPulse& pulse, double t1,
                            double t2, const BareState& init, const SolverOptions& opts = {});

/// X_k(t) = int_0^t lambda_k dt' on `grid` (grid must start at or after 0).
std::vector<Vec3d> accumulated_phases(const SystemParams& params, const ControlPulse& pulse,
                                      std::span<const double> grid,
                                      const SolverOptions& opts = {});

/// Appends one row computed from a normalized bare state; shared by every
/// pure-state evolution path.
void append_pure_row(TrajectoryRecord& rec, const SystemParams& params,
                     const ControlPulse& pulse, double t, const Vec3c& bare,
                     const Vec3d& phases, double norm);

}  // namespace lambda_sim

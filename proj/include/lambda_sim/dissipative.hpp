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

#include <vector>

#include "lambda_sim/propagator.hpp"

namespace lambda_sim {

/// Unnormalized resummed state phi(t) and its norm Z(t).
struct DissipativeState {
  Vec3c phi_unnormalized = Vec3c::Zero();
  double Z = 0.0;
  double t = 0.0;

  Vec3c normalized() const { return phi_unnormalized / Z; }
};

/// Raised when Z(t) falls below 1e-14.
class DegenerateNormalization : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Collapse source direction e_b + e_c.
Vec3c collapse_source();

/// Resummed spontaneous-decay wavefunction, integrated as
///   dphi/dt = -(iH(t) + Gamma) phi + (Gamma/2)(1 - exp(-Gamma t))(e_b + e_c),
/// phi(0) = init. The record holds phi/Z in `bare`, Z in `norm` and the
/// eigenbasis coefficients W_k in `eigen`.
TrajectoryRecord evolve_dissipative(const SystemParams& params, const ControlPulse& pulse,
                                    const TimeSpan& span, const BareState& init,
                                    const SolverOptions& opts = {});

/// Same quantity at a single instant, evaluated from the time integral
/// directly with a composite trapezoid rule over n_quad nodes. Each node
/// propagates e_b + e_c from t1 to t. Nodes run on the OpenMP pool.
DissipativeState quadrature_oracle(const SystemParams& params, const ControlPulse& pulse, double t,
                                   const BareState& init, const SolverOptions& opts, int n_quad);

/// Single-threaded reference for quadrature_oracle; bit-identical result.
DissipativeState quadrature_oracle_serial(const SystemParams& params, const ControlPulse& pulse,
                                          double t, const BareState& init,
                                          const SolverOptions& opts, int n_quad);

/// W_k(t) = <u_k(t)|Psi(t)> exp(+i X_k(t)) for every recorded row.
std::vector<Vec3c> eigen_coefficients(const TrajectoryRecord& traj, const SystemParams& params);

/// Same, with caller-supplied frames (one per row).
std::vector<Vec3c> eigen_coefficients(const TrajectoryRecord& traj,
                                      const std::vector<EigenFrame>& frames);

/// Poisson probability (Gamma t)^l / l! * exp(-Gamma t).
double poisson_weight(int l, double t, double gamma);

}  // namespace lambda_sim

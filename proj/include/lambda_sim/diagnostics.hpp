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

#include "lambda_sim/propagator.hpp"

namespace lambda_sim {

/// F = |<u_1|Psi>|.
double fidelity(const EigenFrame& frame, const BareState& state);
double fidelity(const EigenFrame& frame, const EigenState& state);

std::array<double, 3> populations(const BareState& state);

/// 1 - P_inf with P_inf = exp(-2 pi (sqrt(Omega0^2 + g0^2) - Omega0) / r),
/// in units where Omega0 = 1.
double berry_retrieval_fidelity(double g0, double r);

/// Adiabaticity vectors for the dark state. Only Gamma_1 is available in
/// closed form, so D_2 and the angle chi are not provided.
struct OregVectors {
  std::array<double, 8> S{};
  std::array<double, 8> Gamma1{};
  double D1 = 0.0;
};

OregVectors oreg_vectors(const SystemParams& params, double omega_c);

/// D_1 = S . Gamma_1.
double oreg_d1(const SystemParams& params, double omega_c);

struct SteadyStateReadout {
  double F_final = 0.0;
  std::array<double, 3> pops_final{};
  double t_readout = 0.0;
  /// max |F(t) - F_final| over the saturation window [4/r, 8/r].
  double saturation_drift = 0.0;
};

/// Reads the record at 8/r (storage/retrieval) or at its last row (constant
/// pulse). Throws std::domain_error when the record ends before 8/r.
SteadyStateReadout steady_state_readout(const TrajectoryRecord& traj, const ControlPulse& pulse);

}  // namespace lambda_sim

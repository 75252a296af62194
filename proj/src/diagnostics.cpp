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

#include "lambda_sim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lambda_sim {

double fidelity(const EigenFrame& frame, const BareState& state) {
  return std::abs(frame.u(0).dot(state.amps));
}

double fidelity(const EigenFrame& frame, const EigenState& state) {
  return fidelity(frame, eigen_to_bare(frame, state));
}

std::array<double, 3> populations(const BareState& state) {
  return {std::norm(state.amps(0)), std::norm(state.amps(1)), std::norm(state.amps(2))};
}

double berry_retrieval_fidelity(double g0, double r) {
  if (!(g0 > 0.0) || !(r > 0.0)) throw std::domain_error("berry formula needs g0, r > 0");
  // sqrt(1 + g^2) - 1 without cancellation for small g
  const double gap = g0 * g0 / (std::sqrt(1.0 + g0 * g0) + 1.0);
  const double p_inf = std::exp(-2.0 * std::numbers::pi * gap / r);
  return 1.0 - p_inf;
}

OregVectors oreg_vectors(const SystemParams& params, double omega_c) {
  const double delta = params.delta();
  const double g = params.g_n();
  const double theta = mixing_angles(params, omega_c).theta;
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const double rt3 = std::sqrt(3.0);

  OregVectors v;
  v.S = {0.0, 0.0, -std::sin(2.0 * theta), 0.0, 0.0, 0.0, c * c, (1.0 - 3.0 * s * s) / rt3};
  const double norm = std::sqrt(g * g + omega_c * omega_c + 4.0 * delta * delta / 3.0);
  v.Gamma1 = {-g / norm, -omega_c / norm, 0.0, 0.0, 0.0, 0.0, delta / norm, -delta / (rt3 * norm)};
  double d = 0.0;
  for (int i = 0; i < 8; ++i) d += v.S[i] * v.Gamma1[i];
  v.D1 = d;
  return v;
}

double oreg_d1(const SystemParams& params, double omega_c) {
  return oreg_vectors(params, omega_c).D1;
}

SteadyStateReadout steady_state_readout(const TrajectoryRecord& traj, const ControlPulse& pulse) {
  if (traj.size() == 0) throw std::domain_error("empty trajectory");
  SteadyStateReadout out;
  std::size_t idx = traj.size() - 1;
  double window_start = traj.times.front() + 0.5 * (traj.times.back() - traj.times.front());

  if (pulse.kind() != PulseKind::Constant) {
    const double t_read = 8.0 / pulse.rate();
    const double slack = 1e-9 * std::max(1.0, t_read);
    if (traj.times.back() < t_read - slack)
      throw std::domain_error("trajectory ends before the 8/r readout time");
    auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t_read - slack);
    idx = static_cast<std::size_t>(it - traj.times.begin());
    window_start = 4.0 / pulse.rate();
  }

  out.F_final = traj.fidelity[idx];
  out.pops_final = traj.populations[idx];
  out.t_readout = traj.times[idx];
  for (std::size_t i = 0; i <= idx; ++i) {
    if (traj.times[i] < window_start) continue;
    out.saturation_drift = std::max(out.saturation_drift, std::abs(traj.fidelity[i] - out.F_final));
  }
  return out;
}

}  // namespace lambda_sim

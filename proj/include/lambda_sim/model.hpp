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

#include "lambda_sim/types.hpp"

namespace lambda_sim {

/// Scaled physical constants of the atom-cavity system. Rates and couplings
/// are in units of the control amplitude scale, which is fixed to 1.
struct SystemParams {
  double g0 = 0.1;
  double omega0 = 1.0;
  double r = 0.1;
  double gamma = 0.0;
  double delta_s = 0.0;
  double delta_c = 0.0;
  int n = 0;
  double phi = 0.0;

  /// Effective signal coupling g0 * sqrt(n + 1).
  double g_n() const;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  bool two_photon_resonant() const { return delta_s == delta_c; }

  /// Common detuning; throws std::domain_error off two-photon resonance.
  double delta() const;
};

enum class PulseKind { Storage, Retrieval, Constant };

/// Classical control-field protocol Omega_C(t).
class ControlPulse {
 public:
  static ControlPulse storage(double r, double omega0 = 1.0);
  static ControlPulse retrieval(double r, double omega0 = 1.0);
  static ControlPulse constant(double level);

  /// Pulse matching the process of `params` (storage or retrieval).
  static ControlPulse for_process(PulseKind kind, const SystemParams& params);

  PulseKind kind() const { return kind_; }
  double rate() const { return r_; }
  double omega0() const { return omega0_; }
  double level() const { return level_; }

  /// Omega_C(t); throws std::domain_error for t < 0.
  double amplitude(double t) const;
  /// dOmega_C/dt; throws std::domain_error for t < 0.
  double derivative(double t) const;

 private:
  ControlPulse(PulseKind kind, double r, double omega0, double level)
      : kind_(kind), r_(r), omega0_(omega0), level_(level) {}

  PulseKind kind_;
  double r_;
  double omega0_;
  double level_;
};

struct MixingAngles {
  double theta;
  double psi;
};

struct AngleRates {
  double theta_dot;
  double psi_dot;
};

/// Instantaneous spectral data of H(t) at one instant. Vectors are ordered
/// (dark, +, -) and stored as columns.
struct EigenFrame {
  double t = 0.0;
  double theta = 0.0;
  double psi = 0.0;
  Vec3d lambdas = Vec3d::Zero();
  Mat3c vectors = Mat3c::Identity();

  Vec3c u(int k) const { return vectors.col(k); }
};

/// Bare-basis amplitudes (a_n, b_n, c_n) of the rotating-frame vector.
struct BareState {
  Vec3c amps = Vec3c::Zero();
};

/// Eigenbasis coefficients V_k (or W_k) with the accumulated dynamical
/// phases X_k(t) = int_0^t lambda_k dt'. Gauge phases beta_k vanish
/// identically for this eigenvector choice and are not stored.
struct EigenState {
  Vec3c amps = Vec3c::Zero();
  Vec3d phases = Vec3d::Zero();
};

double pulse_amplitude(const ControlPulse& pulse, double t);
double pulse_derivative(const ControlPulse& pulse, double t);

/// theta in (0, pi/2] with theta = pi/2 exactly at omega_c = 0. psi is the
/// bright-sector angle with tan(psi/2) = (Delta/2 + Omega_R) / Omega_eff, so
/// psi = pi/2 at Delta = 0.
MixingAngles mixing_angles(const SystemParams& params, double omega_c);

/// 3x3 rotating-frame Hamiltonian in basis order (a, b, c). The control field
/// enters as Omega_C * exp(i phi).
Mat3c hamiltonian_matrix(const SystemParams& params, double omega_c);

/// Closed-form eigensystem. Requires two-photon resonance.
EigenFrame eigenframe(const SystemParams& params, double omega_c, double t);

AngleRates angle_rates(const SystemParams& params, double omega_c, double domega);

/// Table C(m, k) = <u_m | d/dt u_k>. Anti-Hermitian with zero diagonal.
Mat3c nonadiabatic_couplings(const EigenFrame& frame, double theta_dot, double psi_dot,
                             double phi);

/// Psi = sum_k V_k exp(-i X_k) u_k.
BareState eigen_to_bare(const EigenFrame& frame, const EigenState& state);

/// V_k = <u_k | Psi> exp(+i X_k).
EigenState bare_to_eigen(const EigenFrame& frame, const BareState& state, const Vec3d& phases);

/// Instantaneous eigenvalues at time t for the given pulse.
Vec3d eigenvalues_at(const SystemParams& params, const ControlPulse& pulse, double t);

/// Dark state u_1 at the start of `pulse`, as a bare state.
BareState dark_initial_state(const SystemParams& params, const ControlPulse& pulse);

}  // namespace lambda_sim

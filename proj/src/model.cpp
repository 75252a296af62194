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

#include "lambda_sim/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lambda_sim {

double SystemParams::g_n() const { return g0 * std::sqrt(static_cast<double>(n) + 1.0); }

void SystemParams::validate() const {
  if (!(g0 > 0.0)) throw std::invalid_argument("g0 must be positive");
  if (!(omega0 > 0.0)) throw std::invalid_argument("omega0 must be positive");
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be non-negative");
  if (n < 0) throw std::invalid_argument("photon number must be non-negative");
  if (!std::isfinite(delta_s) || !std::isfinite(delta_c) || !std::isfinite(phi))
    throw std::invalid_argument("detunings and phase must be finite");
}

double SystemParams::delta() const {
  if (!two_photon_resonant())
    throw std::domain_error("eigenframe requires two-photon resonance (delta_s == delta_c)");
  return delta_s;
}

ControlPulse ControlPulse::storage(double r, double omega0) {
  if (!(r > 0.0)) throw std::invalid_argument("pulse rate must be positive");
  return {PulseKind::Storage, r, omega0, 0.0};
}

ControlPulse ControlPulse::retrieval(double r, double omega0) {
  if (!(r > 0.0)) throw std::invalid_argument("pulse rate must be positive");
  return {PulseKind::Retrieval, r, omega0, 0.0};
}

ControlPulse ControlPulse::constant(double level) {
  if (!(level >= 0.0)) throw std::invalid_argument("constant pulse level must be >= 0");
  return {PulseKind::Constant, 0.0, 1.0, level};
}

ControlPulse ControlPulse::for_process(PulseKind kind, const SystemParams& params) {
  switch (kind) {
    case PulseKind::Storage:
      return storage(params.r, params.omega0);
    case PulseKind::Retrieval:
      return retrieval(params.r, params.omega0);
    case PulseKind::Constant:
      break;
  }
  throw std::invalid_argument("for_process needs storage or retrieval");
}

double ControlPulse::amplitude(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("pulse evaluated at negative time " + std::to_string(t));
  switch (kind_) {
    case PulseKind::Storage:
      // 1 - tanh(x) written without cancellation
      return omega0_ * 2.0 / (std::exp(2.0 * r_ * t) + 1.0);
    case PulseKind::Retrieval:
      return omega0_ * std::tanh(r_ * t);
    case PulseKind::Constant:
      return level_;
  }
  return 0.0;
}

double ControlPulse::derivative(double t) const {
  if (!(t >= 0.0)) throw std::domain_error("pulse evaluated at negative time " + std::to_string(t));
  if (kind_ == PulseKind::Constant) return 0.0;
  const double c = std::cosh(r_ * t);
  const double sech2 = std::isfinite(c) ? 1.0 / (c * c) : 0.0;
  const double d = omega0_ * r_ * sech2;
  return kind_ == PulseKind::Storage ? -d : d;
}

double pulse_amplitude(const ControlPulse& pulse, double t) { return pulse.amplitude(t); }

double pulse_derivative(const ControlPulse& pulse, double t) { return pulse.derivative(t); }

MixingAngles mixing_angles(const SystemParams& params, double omega_c) {
  const double g = params.g_n();
  const double omega_eff = std::hypot(g, omega_c);
  const double delta = params.delta_c;
  MixingAngles out{};
  out.theta = std::atan2(g, omega_c);
  out.psi = std::atan2(omega_eff, -0.5 * delta);
  return out;
}

Mat3c hamiltonian_matrix(const SystemParams& params, double omega_c) {
  const double g = params.g_n();
  const Complex field = std::polar(omega_c, params.phi);
  Mat3c h;
  h << 0.0, g, -field,
       g, params.delta_s, 0.0,
       -std::conj(field), 0.0, params.delta_c;
  return h;
}

EigenFrame eigenframe(const SystemParams& params, double omega_c, double t) {
  const double delta = params.delta();
  const double g = params.g_n();
  const double omega_eff = std::hypot(g, omega_c);
  const double omega_r = 0.5 * std::sqrt(delta * delta + 4.0 * omega_eff * omega_eff);
  const MixingAngles ang = mixing_angles(params, omega_c);

  EigenFrame f;
  f.t = t;
  f.theta = ang.theta;
  f.psi = ang.psi;
  f.lambdas << delta, 0.5 * delta + omega_r, 0.5 * delta - omega_r;

  const double ct = std::cos(ang.theta);
  const double st = std::sin(ang.theta);
  const double ch = std::cos(0.5 * ang.psi);
  const double sh = std::sin(0.5 * ang.psi);
  const Complex eph = std::polar(1.0, params.phi);
  const Complex emph = std::conj(eph);

  // bright combination of the lower states
  Vec3c bright(0.0, st, -ct * emph);

  f.vectors.col(0) = Vec3c(0.0, ct * eph, st);
  f.vectors.col(1) = ch * Vec3c(1.0, 0.0, 0.0) + sh * bright;
  f.vectors.col(2) = -sh * Vec3c(1.0, 0.0, 0.0) + ch * bright;
  return f;
}

AngleRates angle_rates(const SystemParams& params, double omega_c, double domega) {
  const double g = params.g_n();
  const double eff2 = g * g + omega_c * omega_c;
  const double delta = params.delta_c;
  AngleRates out{};
  out.theta_dot = -g / eff2 * domega;
  out.psi_dot = -2.0 * delta * omega_c * domega / (std::sqrt(eff2) * (delta * delta + 4.0 * eff2));
  return out;
}

Mat3c nonadiabatic_couplings(const EigenFrame& frame, double theta_dot, double psi_dot,
                             double phi) {
  const Complex emph = std::polar(1.0, -phi);
  Mat3c c = Mat3c::Zero();
  c(0, 1) = theta_dot * std::sin(0.5 * frame.psi) * emph;
  c(0, 2) = theta_dot * std::cos(0.5 * frame.psi) * emph;
  c(1, 2) = -0.5 * psi_dot;
  c(1, 0) = -std::conj(c(0, 1));
  c(2, 0) = -std::conj(c(0, 2));
  c(2, 1) = -std::conj(c(1, 2));
  return c;
}

BareState eigen_to_bare(const EigenFrame& frame, const EigenState& state) {
  BareState out;
  for (int k = 0; k < 3; ++k)
    out.amps += state.amps(k) * std::polar(1.0, -state.phases(k)) * frame.vectors.col(k);
  return out;
}

EigenState bare_to_eigen(const EigenFrame& frame, const BareState& state, const Vec3d& phases) {
  EigenState out;
  out.phases = phases;
  for (int k = 0; k < 3; ++k)
    out.amps(k) = frame.vectors.col(k).dot(state.amps) * std::polar(1.0, phases(k));
  return out;
}

Vec3d eigenvalues_at(const SystemParams& params, const ControlPulse& pulse, double t) {
  const double delta = params.delta();
  const double g = params.g_n();
  const double omega_c = pulse.amplitude(t);
  const double omega_r = 0.5 * std::sqrt(delta * delta + 4.0 * (g * g + omega_c * omega_c));
  return {delta, 0.5 * delta + omega_r, 0.5 * delta - omega_r};
}

BareState dark_initial_state(const SystemParams& params, const ControlPulse& pulse) {
  const EigenFrame f = eigenframe(params, pulse.amplitude(0.0), 0.0);
  return BareState{f.u(0)};
}

}  // namespace lambda_sim

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

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lambda_sim/model.hpp"

using namespace lambda_sim;

namespace {

SystemParams resonant(double g0, double delta, double phi = 0.0) {
  SystemParams p;
  p.g0 = g0;
  p.delta_s = p.delta_c = delta;
  p.phi = phi;
  return p;
}

}  // namespace

TEST_CASE("pulse shapes and derivatives") {
  const ControlPulse s = ControlPulse::storage(0.2);
  const ControlPulse r = ControlPulse::retrieval(0.2);
  CHECK(s.amplitude(0.0) == doctest::Approx(1.0));
  CHECK(r.amplitude(0.0) == 0.0);
  CHECK(s.amplitude(3.0) + r.amplitude(3.0) == doctest::Approx(1.0));
  CHECK(r.amplitude(3.0) == doctest::Approx(std::tanh(0.6)).epsilon(1e-14));

  // far tail stays finite and positive
  CHECK(s.amplitude(1e4) >= 0.0);
  CHECK(std::isfinite(s.amplitude(1e4)));
  CHECK(std::isfinite(s.derivative(1e4)));

  const double h = 1e-6;
  for (double t : {0.1, 1.0, 7.0, 20.0}) {
    for (const ControlPulse& p : {s, r}) {
      const double fd = (p.amplitude(t + h) - p.amplitude(t - h)) / (2 * h);
      CHECK(p.derivative(t) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
  CHECK_THROWS_AS(s.amplitude(-1.0), std::domain_error);
  CHECK_THROWS_AS(r.derivative(-1e-9), std::domain_error);

  const ControlPulse c = ControlPulse::constant(0.4);
  CHECK(c.amplitude(12.0) == 0.4);
  CHECK(c.derivative(12.0) == 0.0);
}

TEST_CASE("parameter validation") {
  SystemParams p;
  CHECK_NOTHROW(p.validate());
  p.n = 3;
  CHECK(p.g_n() == doctest::Approx(0.2));
  for (auto breaker : std::initializer_list<void (*)(SystemParams&)>{
           [](SystemParams& q) { q.g0 = 0.0; }, [](SystemParams& q) { q.r = -0.1; },
           [](SystemParams& q) { q.gamma = -1.0; }, [](SystemParams& q) { q.n = -1; },
           [](SystemParams& q) { q.omega0 = 0.0; }}) {
    SystemParams q;
    breaker(q);
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  }
  SystemParams off;
  off.delta_s = 0.1;
  CHECK_FALSE(off.two_photon_resonant());
  CHECK_THROWS_AS(off.delta(), std::domain_error);
}

TEST_CASE("closed-form eigenvalues match a numerical Hermitian solver") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const SystemParams p = resonant(0.01 + u(rng), 4.0 * u(rng) - 2.0, 6.0 * u(rng) - 3.0);
    const double oc = 2.0 * u(rng);
    const EigenFrame f = eigenframe(p, oc, 0.0);

    Eigen::SelfAdjointEigenSolver<Mat3c> solver(hamiltonian_matrix(p, oc));
    std::array<double, 3> mine{f.lambdas(0), f.lambdas(1), f.lambdas(2)};
    std::sort(mine.begin(), mine.end());
    for (int k = 0; k < 3; ++k) CHECK(mine[k] == doctest::Approx(solver.eigenvalues()(k)).epsilon(1e-12).scale(1.0));

    const Mat3c h = hamiltonian_matrix(p, oc);
    CHECK((h - h.adjoint()).norm() < 1e-15);
    for (int k = 0; k < 3; ++k) CHECK((h * f.u(k) - f.lambdas(k) * f.u(k)).norm() < 1e-12);
    CHECK((f.vectors.adjoint() * f.vectors - Mat3c::Identity()).norm() < 1e-13);
    CHECK(std::abs(f.u(0)(kA)) < 1e-15);  // dark state has no excited-level amplitude
  }
}

TEST_CASE("mixing angle limits") {
  const SystemParams p = resonant(0.1, 0.0);
  CHECK(mixing_angles(p, 0.0).theta == std::numbers::pi / 2);
  CHECK(mixing_angles(p, 1.0).psi == doctest::Approx(std::numbers::pi / 2));
  CHECK(mixing_angles(p, 1.0).theta == doctest::Approx(std::atan(0.1)));
  const EigenFrame f = eigenframe(p, 1.0, 0.0);
  const double omega_r = 0.5 * std::sqrt(4.0 * (0.01 + 1.0));
  CHECK(f.lambdas(0) == 0.0);
  CHECK(f.lambdas(1) == doctest::Approx(omega_r));
  CHECK(f.lambdas(2) == doctest::Approx(-omega_r));
}

TEST_CASE("non-adiabatic couplings agree with finite differences of the frame") {
  const double h = 1e-6;
  for (double delta : {0.0, 0.35, -0.8}) {
    const SystemParams p = resonant(0.15, delta, 0.9);
    for (const ControlPulse& pulse : {ControlPulse::storage(0.3), ControlPulse::retrieval(0.3)}) {
      for (double t : {0.4, 2.5, 6.0}) {
        const double oc = pulse.amplitude(t);
        const EigenFrame f = eigenframe(p, oc, t);
        const EigenFrame fm = eigenframe(p, pulse.amplitude(t - h), t - h);
        const EigenFrame fp = eigenframe(p, pulse.amplitude(t + h), t + h);
        const AngleRates rates = angle_rates(p, oc, pulse.derivative(t));
        const Mat3c c = nonadiabatic_couplings(f, rates.theta_dot, rates.psi_dot, p.phi);
        const Mat3c fd = f.vectors.adjoint() * (fp.vectors - fm.vectors) / (2 * h);
        CHECK((c - fd).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((c + c.adjoint()).norm() < 1e-15);
        for (int k = 0; k < 3; ++k) CHECK(c(k, k) == Complex(0.0, 0.0));
      }
    }
  }
}

TEST_CASE("eigen and bare representations round-trip") {
  const SystemParams p = resonant(0.2, 0.4, -1.1);
  const EigenFrame f = eigenframe(p, 0.6, 3.0);
  EigenState v;
  v.amps = Vec3c(Complex(0.3, 0.1), Complex(-0.5, 0.2), Complex(0.0, 0.7));
  v.phases = Vec3d(1.2, -0.4, 5.0);
  const BareState b = eigen_to_bare(f, v);
  const EigenState back = bare_to_eigen(f, b, v.phases);
  CHECK((back.amps - v.amps).norm() < 1e-14);
  CHECK(b.amps.norm() == doctest::Approx(v.amps.norm()));
}

TEST_CASE("dark initial state") {
  const SystemParams p = resonant(0.1, 0.0);
  const BareState ret = dark_initial_state(p, ControlPulse::retrieval(0.1));
  CHECK(std::abs(ret.amps(kB)) == doctest::Approx(0.0));
  CHECK(std::abs(ret.amps(kC)) == doctest::Approx(1.0));
  const BareState sto = dark_initial_state(p, ControlPulse::storage(0.1));
  CHECK(std::abs(sto.amps(kA)) == 0.0);
  CHECK(std::abs(sto.amps(kB)) == doctest::Approx(1.0 / std::sqrt(1.01)));
}

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
#include <cmath>

#include "lambda_sim/dissipative.hpp"
#include "lambda_sim/parallel.hpp"

using namespace lambda_sim;

namespace {

// Closed form of the resummed wavefunction for a constant Hamiltonian. In the
// eigenbasis of H (eigenvalue l, a = gamma + i l) the source integral is
//   int_0^t (1 - e^{-gamma s}) e^{-a (t - s)} ds
//     = (1 - e^{-a t}) / a - (e^{-gamma t} - e^{-a t}) / (i l).
Vec3c closed_form_phi(const Mat3c& h, double gamma, const Vec3c& init, double t) {
  Eigen::SelfAdjointEigenSolver<Mat3c> es(h);
  const Mat3c v = es.eigenvectors();
  const Vec3c src = Vec3c(0.0, 1.0, 1.0);
  Vec3c out = Vec3c::Zero();
  for (int j = 0; j < 3; ++j) {
    const double l = es.eigenvalues()(j);
    const Complex a(gamma, l);
    const Complex u = std::exp(Complex(0.0, -l * t));
    Complex source = (1.0 - std::exp(-a * t)) / a;
    if (std::abs(l) > 1e-12)
      source -= (std::exp(-gamma * t) - std::exp(-a * t)) / Complex(0.0, l);
    else
      source -= t * std::exp(-gamma * t);
    const Complex coeff = std::exp(-gamma * t) * u * v.col(j).dot(init) +
                          0.5 * gamma * source * v.col(j).dot(src);
    out += coeff * v.col(j);
  }
  return out;
}

SystemParams base_params(double gamma) {
  SystemParams p;
  p.g0 = 0.1;
  p.r = 0.2;
  p.gamma = gamma;
  return p;
}

}  // namespace

TEST_CASE("constant Hamiltonian matches the closed-form resummed state") {
  for (double gamma : {0.05, 0.5, 2.0}) {
    SystemParams p = base_params(gamma);
    p.g0 = 0.3;
    p.delta_s = p.delta_c = 0.2;
    const ControlPulse pulse = ControlPulse::constant(0.6);
    const BareState init = dark_initial_state(p, pulse);
    SolverOptions o;
    o.output_grid = uniform_grid(0.0, 12.0, 25);
    const auto rec = evolve_dissipative(p, pulse, {0.0, 12.0}, init, o);
    const Mat3c h = hamiltonian_matrix(p, 0.6);
    for (std::size_t i = 0; i < rec.size(); ++i) {
      const Vec3c exact = closed_form_phi(h, gamma, init.amps, rec.times[i]);
      CHECK(rec.norm[i] == doctest::Approx(exact.norm()).epsilon(1e-8));
      CHECK((rec.bare[i] * rec.norm[i] - exact).norm() < 1e-8);
      CHECK(rec.bare[i].norm() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("vanishing gamma reproduces the unitary run") {
  const SystemParams p0 = base_params(0.0);
  for (const ControlPulse& pulse : {ControlPulse::storage(0.2), ControlPulse::retrieval(0.2)}) {
    const BareState init = dark_initial_state(p0, pulse);
    SolverOptions o;
    o.output_grid = uniform_grid(0.0, 40.0, 101);
    const auto ref = evolve_bare(p0, pulse, {0.0, 40.0}, init, o);
    for (double gamma : {0.0, 1e-8}) {
      const auto dis = evolve_dissipative(base_params(gamma), pulse, {0.0, 40.0}, init, o);
      for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK((ref.bare[i] - dis.bare[i]).norm() < 1e-6);
        CHECK(std::abs(ref.fidelity[i] - dis.fidelity[i]) < 1e-6);
      }
    }
  }
}

TEST_CASE("quadrature oracle agrees with the ODE and with its serial reference") {
  const SystemParams p = base_params(0.5);
  for (const ControlPulse& pulse : {ControlPulse::storage(0.2), ControlPulse::retrieval(0.2)}) {
    const BareState init = dark_initial_state(p, pulse);
    const double t = 15.0;
    SolverOptions o;
    o.output_grid = {0.0, t};
    const auto rec = evolve_dissipative(p, pulse, {0.0, t}, init, o);
    const DissipativeState q = quadrature_oracle(p, pulse, t, init, SolverOptions{}, 256);
    CHECK((rec.bare.back() * rec.norm.back() - q.phi_unnormalized).cwiseAbs().maxCoeff() < 1e-4);
    CHECK(q.Z == doctest::Approx(q.phi_unnormalized.norm()));

    const DissipativeState s = quadrature_oracle_serial(p, pulse, t, init, SolverOptions{}, 256);
    CHECK(s.phi_unnormalized == q.phi_unnormalized);
  }
  CHECK_THROWS_AS(quadrature_oracle(p, ControlPulse::storage(0.2), 1.0, BareState{}, {}, 8),
                  std::invalid_argument);
}

TEST_CASE("eigenbasis coefficients stay normalized") {
  const SystemParams p = base_params(1.0);
  const ControlPulse pulse = ControlPulse::retrieval(0.2);
  const auto rec = evolve_dissipative(p, pulse, {0.0, 40.0}, dark_initial_state(p, pulse));
  const auto w = eigen_coefficients(rec, p);
  REQUIRE(w.size() == rec.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(w[i].squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(w[i](0)) == doctest::Approx(rec.fidelity[i]).epsilon(1e-10));
  }
}

TEST_CASE("dissipative evolution preconditions") {
  const SystemParams p = base_params(0.1);
  CHECK(collapse_source() == Vec3c(0.0, 1.0, 1.0));
  CHECK_THROWS(evolve_dissipative(p, ControlPulse::storage(0.2), {1.0, 2.0}, BareState{}));
  BareState zero;
  CHECK_THROWS_AS(evolve_dissipative(p, ControlPulse::storage(0.2), {0.0, 2.0}, zero),
                  DegenerateNormalization);
}

TEST_CASE("Poisson weights") {
  for (double gt : {0.0, 0.3, 4.0, 60.0}) {
    double sum = 0.0;
    for (int l = 0; l < 400; ++l) sum += poisson_weight(l, gt, 1.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(poisson_weight(0, 2.0, 0.5) == doctest::Approx(std::exp(-1.0)));
  CHECK(poisson_weight(3, 2.0, 0.5) == doctest::Approx(std::exp(-1.0) / 6.0));
  CHECK(poisson_weight(2, 1.0, 0.0) == 0.0);
  CHECK(std::isfinite(poisson_weight(300, 100.0, 1.0)));
}

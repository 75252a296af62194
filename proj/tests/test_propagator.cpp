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

#include "lambda_sim/ode.hpp"
#include "lambda_sim/propagator.hpp"

using namespace lambda_sim;

namespace {

// exp(-i H t) psi through a numerical eigendecomposition of the constant H.
Vec3c exact_constant(const Mat3c& h, const Vec3c& psi, double t) {
  Eigen::SelfAdjointEigenSolver<Mat3c> es(h);
  Vec3c phase;
  for (int k = 0; k < 3; ++k) phase(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * t));
  return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint() * psi;
}

}  // namespace

TEST_CASE("adaptive and fixed-step integrators on the harmonic oscillator") {
  using V = Eigen::Vector2d;
  auto rhs = [](double, const V& y) { return V(y(1), -y(0)); };
  const std::vector<double> grid = uniform_grid(0.0, 10.0, 11);
  for (SolverMethod m : {SolverMethod::AdaptiveRK45, SolverMethod::FixedRK4}) {
    SolverOptions o;
    o.method = m;
    o.max_step = m == SolverMethod::FixedRK4 ? 1e-3 : 0.5;
    V y(1.0, 0.0);
    std::vector<double> seen;
    integrate(rhs, y, 0.0, grid, o, [&](double t, const V& s) {
      seen.push_back(t);
      CHECK(s(0) == doctest::Approx(std::cos(t)).epsilon(1e-8).scale(1.0));
      CHECK(s(1) == doctest::Approx(-std::sin(t)).epsilon(1e-8).scale(1.0));
    });
    CHECK(seen == grid);
  }
}

TEST_CASE("blow-up raises IntegrationError") {
  using V = Eigen::Matrix<double, 1, 1>;
  auto rhs = [](double, const V& y) { return V(y(0) * y(0)); };
  V y(1.0);
  const std::vector<double> grid{0.5, 2.0};
  CHECK_THROWS_AS(integrate(rhs, y, 0.0, grid, SolverOptions{}, [](double, const V&) {}),
                  IntegrationError);
}

TEST_CASE("solver option validation") {
  SolverOptions o;
  CHECK_NOTHROW(o.validate());
  o.rel_tol = -1.0;
  CHECK_THROWS(o.validate());
  o = {};
  o.output_grid = {0.0, 2.0, 1.0};
  CHECK_THROWS(o.validate());
}

TEST_CASE("constant control field matches the exact propagator") {
  SystemParams p;
  p.g0 = 0.3;
  p.delta_s = p.delta_c = 0.25;
  p.phi = 0.4;
  const ControlPulse pulse = ControlPulse::constant(0.7);
  BareState init;
  init.amps = Vec3c(0.0, 0.6, 0.8);
  SolverOptions o;
  o.output_grid = uniform_grid(0.0, 10.0, 21);
  const auto rec = evolve_bare(p, pulse, {0.0, 10.0}, init, o);
  const Mat3c h = hamiltonian_matrix(p, 0.7);
  for (std::size_t i = 0; i < rec.size(); ++i)
    CHECK((rec.bare[i] - exact_constant(h, init.amps, rec.times[i])).norm() < 1e-8);

  const auto phases = accumulated_phases(p, pulse, o.output_grid);
  const Vec3d lam = eigenframe(p, 0.7, 0.0).lambdas;
  for (std::size_t i = 0; i < phases.size(); ++i)
    CHECK((phases[i] - lam * o.output_grid[i]).norm() < 1e-9);
}

TEST_CASE("eigenbasis and bare-basis evolution agree") {
  for (double delta : {0.0, 0.3}) {
    for (PulseKind kind : {PulseKind::Storage, PulseKind::Retrieval}) {
      SystemParams p;
      p.g0 = 0.1;
      p.r = 0.5;
      p.delta_s = p.delta_c = delta;
      const ControlPulse pulse = ControlPulse::for_process(kind, p);
      SolverOptions o;
      o.output_grid = uniform_grid(0.0, 16.0, 81);
      EigenState v0;
      v0.amps = Vec3c(1.0, 0.0, 0.0);
      const auto eig = evolve_eigenbasis(p, pulse, {0.0, 16.0}, v0, o);
      const auto bare = evolve_bare(p, pulse, {0.0, 16.0}, dark_initial_state(p, pulse), o);
      REQUIRE(eig.size() == bare.size());
      double worst = 0.0;
      for (std::size_t i = 0; i < eig.size(); ++i) {
        worst = std::max(worst, (eig.bare[i] - bare.bare[i]).norm());
        CHECK(eig.fidelity[i] == doctest::Approx(bare.fidelity[i]).epsilon(1e-6));
        CHECK(std::abs(eig.norm[i] - 1.0) < 1e-8);
      }
      CHECK(worst < 1e-6);
      CHECK(eig.fidelity.front() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("off-resonant bare runs carry NaN eigen columns") {
  SystemParams p;
  p.delta_s = 0.1;
  p.delta_c = 0.2;
  BareState init;
  init.amps = Vec3c(0.0, 1.0, 0.0);
  SolverOptions o;
  o.output_grid = {0.0, 1.0};
  const auto rec = evolve_bare(p, ControlPulse::retrieval(0.1), {0.0, 1.0}, init, o);
  CHECK(std::isnan(rec.fidelity.back()));
  CHECK(std::isnan(rec.eigen.back()(0).real()));
  CHECK(rec.bare.back().norm() == doctest::Approx(1.0));
}

TEST_CASE("propagate_between composes") {
  SystemParams p;
  p.g0 = 0.2;
  const ControlPulse pulse = ControlPulse::storage(0.3);
  BareState init;
  init.amps = Vec3c(Complex(0.0, 0.6), 0.8, 0.0);
  const BareState mid = propagate_between(p, pulse, 1.0, 4.0, init);
  const BareState two = propagate_between(p, pulse, 4.0, 9.0, mid);
  const BareState one = propagate_between(p, pulse, 1.0, 9.0, init);
  CHECK((two.amps - one.amps).norm() < 1e-8);
  CHECK(propagate_between(p, pulse, 2.0, 2.0, init).amps == init.amps);
  CHECK_THROWS(propagate_between(p, pulse, 3.0, 2.0, init));
}

TEST_CASE("default grid and readout time") {
  CHECK(default_t_end(ControlPulse::storage(0.2)) == doctest::Approx(40.0));
  CHECK(default_t_end(ControlPulse::constant(1.0)) == 10.0);
  const auto grid = resolve_grid({0.0, 5.0}, SolverOptions{});
  CHECK(grid.size() == 2001);
  CHECK(grid.back() == 5.0);
}

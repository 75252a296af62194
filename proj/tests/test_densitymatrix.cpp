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

#include "lambda_sim/densitymatrix.hpp"
#include "lambda_sim/diagnostics.hpp"
#include "lambda_sim/parallel.hpp"

using namespace lambda_sim;

namespace {

// Constant-H solution of the reset master equation. With tr(rho) = 1,
//   rho(t) = e^{-G t} U rho0 U^+ + G int_0^t e^{-G s} U(s) R U(s)^+ ds,
// and in the eigenbasis of H the integral of element (j, k) is
//   R'_jk (1 - e^{-(G + i w) t}) / (G + i w),  w = l_j - l_k.
Mat3c closed_form_rho(const Mat3c& h, double gamma, const Mat3c& rho0, double t) {
  Eigen::SelfAdjointEigenSolver<Mat3c> es(h);
  const Mat3c v = es.eigenvectors();
  Mat3c reset = Mat3c::Zero();
  reset(1, 1) = reset(2, 2) = 0.5;
  const Mat3c r0 = v.adjoint() * rho0 * v;
  const Mat3c rr = v.adjoint() * reset * v;
  Mat3c out;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      const double w = es.eigenvalues()(j) - es.eigenvalues()(k);
      const Complex a(gamma, w);
      out(j, k) = std::exp(-a * t) * r0(j, k) + gamma * rr(j, k) * (1.0 - std::exp(-a * t)) / a;
    }
  return v * out * v.adjoint();
}

SystemParams params(double gamma) {
  SystemParams p;
  p.g0 = 0.1;
  p.r = 0.5;
  p.gamma = gamma;
  return p;
}

}  // namespace

TEST_CASE("master equation against the constant-H closed form") {
  SystemParams p = params(0.7);
  p.g0 = 0.4;
  p.delta_s = p.delta_c = -0.3;
  const ControlPulse pulse = ControlPulse::constant(0.9);
  const Vec3c psi = Vec3c(Complex(0.0, 0.6), 0.0, 0.8);
  const DensityMatrix3 rho0 = DensityMatrix3::pure(psi);
  SolverOptions o;
  o.output_grid = uniform_grid(0.0, 8.0, 17);
  const MasterTrajectory m = evolve_master(p, pulse, {0.0, 8.0}, rho0, o);
  const Mat3c h = hamiltonian_matrix(p, 0.9);
  for (std::size_t i = 0; i < m.times.size(); ++i)
    CHECK((m.rho[i] - closed_form_rho(h, 0.7, rho0.rho, m.times[i])).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("master evolution keeps a valid density matrix") {
  const SystemParams p = params(1.0);
  const ControlPulse pulse = ControlPulse::storage(0.5);
  const auto m = evolve_master(p, pulse, {0.0, 16.0},
                               DensityMatrix3::pure(dark_initial_state(p, pulse).amps));
  for (const Mat3c& rho : m.rho) {
    const DensityMatrix3 d{rho};
    CHECK(d.trace() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(d.min_eigenvalue() > -1e-10);
    CHECK((rho - rho.adjoint()).norm() < 1e-12);
  }
  DensityMatrix3 bad;
  bad.rho = Mat3c::Identity();
  CHECK_THROWS(bad.validate());
}

TEST_CASE("jump sampling") {
  const JumpRecord a = sample_jumps(42, 7, 0.5, 100.0);
  const JumpRecord b = sample_jumps(42, 7, 0.5, 100.0);
  CHECK(a.times == b.times);
  CHECK(a.targets == b.targets);
  CHECK(sample_jumps(42, 8, 0.5, 100.0).times != a.times);

  double count = 0.0;
  int to_b = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const JumpRecord j = sample_jumps(1, static_cast<std::uint64_t>(i), 0.5, 10.0);
    for (std::size_t k = 0; k < j.times.size(); ++k) {
      CHECK(j.times[k] >= 0.0);
      CHECK(j.times[k] <= 10.0);
      if (k > 0) CHECK(j.times[k] > j.times[k - 1]);
      CHECK((j.targets[k] == kB || j.targets[k] == kC));
      to_b += j.targets[k] == kB;
    }
    count += static_cast<double>(j.times.size());
  }
  // Poisson mean 5 per trajectory: standard error of the mean is sqrt(5/n)
  CHECK(std::abs(count / n - 5.0) < 5.0 * std::sqrt(5.0 / n));
  CHECK(std::abs(to_b / count - 0.5) < 5.0 * std::sqrt(0.25 / count));
  CHECK(sample_jumps(1, 0, 0.0, 10.0).times.empty());
}

TEST_CASE("jump trajectory without jumps is the unitary run") {
  const SystemParams p = params(0.0);
  const ControlPulse pulse = ControlPulse::retrieval(0.5);
  const BareState init = dark_initial_state(p, pulse);
  const std::vector<double> grid = uniform_grid(0.0, 16.0, 33);
  SolverOptions o;
  o.output_grid = grid;
  const auto ref = evolve_bare(p, pulse, {0.0, 16.0}, init, o);
  const auto traj = run_jump_trajectory(p, pulse, grid, init, JumpRecord{}, o);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK((traj[i] - ref.bare[i]).norm() < 1e-8);

  JumpRecord one;
  one.times = {5.2};
  one.targets = {kC};
  const auto jumped = run_jump_trajectory(p, pulse, grid, init, one, o);
  CHECK((jumped[10] - ref.bare[10]).norm() < 1e-8);  // t = 5, before the jump
  BareState reset;
  reset.amps = Vec3c::Unit(kC);
  const BareState after = propagate_between(p, pulse, 5.2, 5.5, reset);
  CHECK((jumped[11] - after.amps).norm() < 1e-8);
}

TEST_CASE("Monte Carlo ensemble is deterministic across worker counts") {
  const SystemParams p = params(0.5);
  const ControlPulse pulse = ControlPulse::storage(0.5);
  const BareState init = dark_initial_state(p, pulse);
  SolverOptions o;
  o.output_grid = uniform_grid(0.0, 16.0, 9);
  const auto serial = monte_carlo_ensemble_serial(p, pulse, {0.0, 16.0}, init, 600, 99, o);
  const int saved = thread_count();
  for (int threads : {1, 3, 8}) {
    set_thread_count(threads);
    const auto par = monte_carlo_ensemble(p, pulse, {0.0, 16.0}, init, 600, 99, o);
    for (std::size_t i = 0; i < par.mean.size(); ++i) {
      CHECK(par.mean[i] == serial.mean[i]);
      CHECK(par.std_error[i] == serial.std_error[i]);
    }
  }
  set_thread_count(saved);
  CHECK(serial.n_traj == 600);
  CHECK(DensityMatrix3{serial.mean.back()}.trace() == doctest::Approx(1.0));
}

TEST_CASE("Monte Carlo ensemble converges to the master equation") {
  const SystemParams p = params(0.5);
  const ControlPulse pulse = ControlPulse::retrieval(0.5);
  const BareState init = dark_initial_state(p, pulse);
  SolverOptions o;
  o.output_grid = uniform_grid(0.0, 16.0, 5);
  const auto mc = monte_carlo_ensemble(p, pulse, {0.0, 16.0}, init, 4000, 5, o);
  const auto me = evolve_master(p, pulse, {0.0, 16.0}, DensityMatrix3::pure(init.amps), o);
  for (std::size_t i = 0; i < mc.mean.size(); ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const Complex d = mc.mean[i](j, k) - me.rho[i](j, k);
        CHECK(std::abs(d.real()) <= 4.0 * mc.std_error[i](j, k).real() + 1e-8);
        CHECK(std::abs(d.imag()) <= 4.0 * mc.std_error[i](j, k).imag() + 1e-8);
      }
}

TEST_CASE("trace distance") {
  const Mat3c a = DensityMatrix3::pure(Vec3c(1.0, 0.0, 0.0)).rho;
  const Mat3c b = DensityMatrix3::pure(Vec3c(0.0, 1.0, 0.0)).rho;
  CHECK(trace_distance(a, a) == doctest::Approx(0.0));
  CHECK(trace_distance(a, b) == doctest::Approx(1.0));
  CHECK(trace_distance(a, 0.5 * (a + b)) == doctest::Approx(0.5));
}

TEST_CASE("resummed and master models coincide as gamma vanishes") {
  for (const ControlPulse& pulse : {ControlPulse::storage(0.5), ControlPulse::retrieval(0.5)}) {
    const SystemParams tiny = params(1e-8);
    const auto rep = model_discrepancy(tiny, pulse, {0.0, 16.0}, dark_initial_state(tiny, pulse));
    CHECK(rep.max_trace_distance < 1e-6);
    CHECK(rep.times.size() == rep.trace_distance.size());
    const SystemParams big = params(0.5);
    const auto far = model_discrepancy(big, pulse, {0.0, 16.0}, dark_initial_state(big, pulse));
    CHECK(far.max_trace_distance > 1e-3);
  }
}

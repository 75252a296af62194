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

// Wall-clock comparison of the OpenMP kernels against their serial references.

#include <chrono>
#include <cstdio>
#include <functional>

#include "lambda_sim/densitymatrix.hpp"
#include "lambda_sim/dissipative.hpp"
#include "lambda_sim/harness/commands.hpp"
#include "lambda_sim/parallel.hpp"

using namespace lambda_sim;

namespace {

double seconds(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-22s serial %8.3fs  parallel %8.3fs  speedup %5.2fx\n", name, serial, parallel,
              serial / parallel);
}

}  // namespace

int main() {
  const int threads = configure_threads_from_env();
  std::printf("threads: %d\n", threads);

  SystemParams p;
  p.g0 = 0.1;
  p.r = 0.2;
  p.gamma = 0.5;
  const ControlPulse pulse = ControlPulse::retrieval(p.r);
  const BareState init = dark_initial_state(p, pulse);
  const TimeSpan span{0.0, default_t_end(pulse)};
  SolverOptions grid_opts;
  grid_opts.output_grid = uniform_grid(span.t0, span.t1, 201);

  {
    EnsembleResult a, b;
    const double s = seconds([&] { a = monte_carlo_ensemble_serial(p, pulse, span, init, 2000, 1, grid_opts); });
    const double q = seconds([&] { b = monte_carlo_ensemble(p, pulse, span, init, 2000, 1, grid_opts); });
    report("monte_carlo (2000)", s, q);
    if (a.mean.back() != b.mean.back()) std::printf("  warning: results differ\n");
  }
  {
    DissipativeState a, b;
    const double t = 3.0 / p.r;
    const double s = seconds([&] { a = quadrature_oracle_serial(p, pulse, t, init, {}, 512); });
    const double q = seconds([&] { b = quadrature_oracle(p, pulse, t, init, {}, 512); });
    report("quadrature (512)", s, q);
    if (a.phi_unnormalized != b.phi_unnormalized) std::printf("  warning: results differ\n");
  }
  {
    const harness::SweepSpec spec = harness::sweep_preset("fig7");
    std::vector<harness::SweepRow> a, b;
    const double s = seconds([&] { a = harness::execute_sweep_serial(spec); });
    const double q = seconds([&] { b = harness::execute_sweep(spec); });
    report("sweep fig7 (16 cells)", s, q);
  }
  return 0;
}

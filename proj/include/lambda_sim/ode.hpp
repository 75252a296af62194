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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lambda_sim {

enum class SolverMethod { AdaptiveRK45, FixedRK4 };

struct SolverOptions {
  SolverMethod method = SolverMethod::AdaptiveRK45;
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = 0.1;
  /// Empty means "use the caller's default grid".
  std::vector<double> output_grid;

  void validate() const;
};

/// Raised when the step size underflows; carries the time reached.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t_reached)
      : std::runtime_error(what), t_reached_(t_reached) {}
  double t_reached() const { return t_reached_; }

 private:
  double t_reached_;
};

namespace detail {

template <typename State>
double error_norm(const State& err, const State& y0, const State& y1, double atol, double rtol) {
  const auto scale = (atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
  const auto ratio = (err.cwiseAbs().array() / scale).eval();
  return std::sqrt(ratio.square().mean());
}

// Dormand-Prince 5(4) tableau.
struct DP45 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b_hat
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 through every time in `grid` (ascending,
/// each >= t0), calling observe(t, y) at each grid time. Steps are clipped so
/// grid times are hit exactly. `y` holds the state at grid.back() on return.
template <typename State, typename Rhs, typename Observer>
void integrate(Rhs&& rhs, State& y, double t0, std::span<const double> grid,
               const SolverOptions& opts, Observer&& observe) {
  double t = t0;
  if (opts.method == SolverMethod::FixedRK4) {
    for (double target : grid) {
      while (t < target) {
        const double h = std::min(opts.max_step, target - t);
        const State k1 = rhs(t, y);
        const State k2 = rhs(t + 0.5 * h, (y + (0.5 * h) * k1).eval());
        const State k3 = rhs(t + 0.5 * h, (y + (0.5 * h) * k2).eval());
        const State k4 = rhs(t + h, (y + h * k3).eval());
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = (target - t - h <= 0.0) ? target : t + h;
      }
      observe(target, static_cast<const State&>(y));
    }
    return;
  }

  using T = detail::DP45;
  constexpr double kSafety = 0.9;
  constexpr double kMinFactor = 0.2;
  constexpr double kMaxFactor = 5.0;
  constexpr double kAlpha = 0.7 / 5.0;
  constexpr double kBeta = 0.4 / 5.0;

  double h = std::min(opts.max_step, 1e-3);
  double err_prev = 1e-4;
  State k1 = rhs(t, y);
  for (double target : grid) {
    while (t < target) {
      const double remaining = target - t;
      bool clipped = false;
      double step = std::min(h, opts.max_step);
      if (step >= remaining || remaining - step < 0.01 * step) {  // no slivers
        step = remaining;
        clipped = true;
      }
      if (step < 1e-14 * std::max(1.0, std::abs(t)))
        throw IntegrationError("step size underflow at t = " + std::to_string(t), t);

      const State k2 = rhs(t + T::c2 * step, (y + step * (T::a21 * k1)).eval());
      const State k3 = rhs(t + T::c3 * step, (y + step * (T::a31 * k1 + T::a32 * k2)).eval());
      const State k4 =
          rhs(t + T::c4 * step, (y + step * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3)).eval());
      const State k5 = rhs(
          t + T::c5 * step,
          (y + step * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4)).eval());
      const double t_next = clipped ? target : t + step;
      const State k6 = rhs(
          t_next,
          (y + step * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5))
              .eval());
      const State y_new =
          (y + step * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6)).eval();
      const State k7 = rhs(t_next, y_new);
      const State err = (step * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 +
                                 T::e6 * k6 + T::e7 * k7))
                            .eval();
      const double en = detail::error_norm(err, y, y_new, opts.abs_tol, opts.rel_tol);
      if (!std::isfinite(en))
        throw IntegrationError("non-finite state at t = " + std::to_string(t), t);

      if (en <= 1.0) {
        double factor = (en == 0.0) ? kMaxFactor
                                    : kSafety * std::pow(en, -kAlpha) * std::pow(err_prev, kBeta);
        factor = std::clamp(factor, kMinFactor, kMaxFactor);
        err_prev = std::max(en, 1e-4);
        t = t_next;
        y = y_new;
        k1 = k7;
        // a grid-clipped step says nothing about the natural step size
        if (!clipped || factor < 1.0) h = step * factor;
      } else {
        const double factor =
            std::max(kMinFactor, kSafety * std::pow(en, -kAlpha));
        h = step * factor;
      }
    }
    observe(target, static_cast<const State&>(y));
  }
}

/// Uniform grid of n_points from t0 to t1 inclusive.
std::vector<double> uniform_grid(double t0, double t1, std::size_t n_points);

}  // namespace lambda_sim

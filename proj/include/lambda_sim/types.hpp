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

#include <complex>

#include <Eigen/Dense>

namespace lambda_sim {

using Complex = std::complex<double>;
using Vec3c = Eigen::Vector3cd;
using Vec3d = Eigen::Vector3d;
using Mat3c = Eigen::Matrix3cd;

inline constexpr Complex kI{0.0, 1.0};

// Bare basis ordering used everywhere: |a,n>, |b,n+1>, |c,n>.
enum BareIndex : int { kA = 0, kB = 1, kC = 2 };

}  // namespace lambda_sim

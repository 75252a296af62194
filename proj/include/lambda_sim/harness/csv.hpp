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

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lambda_sim/propagator.hpp"

namespace lambda_sim::harness {

using Metadata = std::vector<std::pair<std::string, std::string>>;

inline constexpr const char* kToolVersion = "0.1.0";

/// 12 significant digits in scientific notation; NaN is written as "nan".
std::string format_number(double v);

/// Leading "# key = value" lines.
void write_metadata(std::ostream& out, const Metadata& meta);

/// Header: t,omega_c,F,pa,pb,pc,reV1,imV1,reV2,imV2,reV3,imV3,Z
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec, const Metadata& meta);

/// Writes `content` to `path`, or to stdout for "-". Throws std::runtime_error
/// on I/O failure.
void write_text(const std::string& path, const std::string& content);

}  // namespace lambda_sim::harness

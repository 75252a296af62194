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

#include "lambda_sim/harness/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace lambda_sim::harness {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v == 0.0 ? 0.0 : v);  // folds -0 into 0
  return buf;
}

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [k, v] : meta) out << "# " << k << " = " << v << '\n';
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& rec, const Metadata& meta) {
  write_metadata(out, meta);
  out << "t,omega_c,F,pa,pb,pc,reV1,imV1,reV2,imV2,reV3,imV3,Z\n";
  for (std::size_t i = 0; i < rec.size(); ++i) {
    out << format_number(rec.times[i]) << ',' << format_number(rec.omega_c[i]) << ','
        << format_number(rec.fidelity[i]);
    for (double p : rec.populations[i]) out << ',' << format_number(p);
    for (int k = 0; k < 3; ++k)
      out << ',' << format_number(rec.eigen[i](k).real()) << ','
          << format_number(rec.eigen[i](k).imag());
    out << ',' << format_number(rec.norm[i]) << '\n';
  }
}

void write_text(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace lambda_sim::harness

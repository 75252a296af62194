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

#include "lambda_sim/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace lambda_sim {

int configure_threads_from_env() {
  if (const char* env = std::getenv("LAMBDA_SIM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0 && n < omp_get_max_threads()) omp_set_num_threads(n);
    } catch (const std::exception&) {
      // malformed value: keep the OpenMP default
    }
  }
  return omp_get_max_threads();
}

void set_thread_count(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace lambda_sim

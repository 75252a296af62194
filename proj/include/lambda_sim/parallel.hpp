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

namespace lambda_sim {

/// Caps the OpenMP pool at LAMBDA_SIM_THREADS when it is set to a positive
/// integer. Returns the resulting pool size.
int configure_threads_from_env();

/// Sets the pool size directly (values < 1 are ignored).
void set_thread_count(int n);

int thread_count();

}  // namespace lambda_sim

// Copyright 2026 the drddl authors
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

#ifndef DRDDL_PARALLEL_HPP
#define DRDDL_PARALLEL_HPP

#include <cstdint>
#include <exception>

namespace drddl {

// Batch kernels take an ExecMode so the serial path stays available as a
// reference for tests and benchmarks. Results must not depend on the mode:
// every parallel loop body writes a disjoint slice of the output.
enum class ExecMode { kSerial, kParallel };

// Loop dispatch. kParallel uses OpenMP when the library is compiled with it
// and degrades to the serial loop otherwise. Exceptions thrown by the body
// are captured and rethrown after the parallel region (the first one wins).
template <typename Fn>
void parallel_for(std::int64_t n, ExecMode mode, Fn&& fn) {
  if (mode == ExecMode::kParallel && n > 1) {
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
#pragma omp critical(drddl_parallel_for_err)
        {
          if (!err) err = std::current_exception();
        }
      }
    }
    if (err) std::rethrow_exception(err);
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      fn(i);
    }
  }
}

}  // namespace drddl

#endif  // DRDDL_PARALLEL_HPP

// Copyright 2026 The nvnmr Authors
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

// Ordered map over independent grid points.
//
// `serial_map` is the reference; `openmp_map` must return the same vector
// element for element. Results land at their input index and any exception
// rethrown is the one from the lowest failing index, so output never depends
// on scheduling or worker count.

#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <type_traits>
#include <vector>

#include <omp.h>

namespace nvnmr {

enum class Schedule { serial, openmp };

struct Execution {
  Schedule schedule = Schedule::openmp;
  int workers = 0;  // 0: OpenMP default

  static Execution serial() { return {Schedule::serial, 1}; }
};

int default_workers();

template <class F>
auto serial_map(std::size_t n, F&& f) {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(f(i));
  return out;
}

template <class F>
auto openmp_map(std::size_t n, F&& f, int workers = 0) {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  const auto count = static_cast<long>(n);

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long i = 0; i < count; ++i) {
    try {
      slots[i].emplace(f(static_cast<std::size_t>(i)));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

template <class F>
auto ordered_map(std::size_t n, F&& f, const Execution& exec) {
  if (exec.schedule == Schedule::serial) return serial_map(n, std::forward<F>(f));
  return openmp_map(n, std::forward<F>(f), exec.workers);
}

}  // namespace nvnmr

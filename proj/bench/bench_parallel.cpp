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

// Serial reference against the OpenMP kernels on the two parallel workloads.

#include <benchmark/benchmark.h>

#include "nvnmr/detection.hpp"
#include "nvnmr/spectroscopy.hpp"

namespace {

using namespace nvnmr;

Execution policy(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial() : Execution{Schedule::openmp, 0};
}

const ValidatedSystem& aldehyde() {
  static const ValidatedSystem sys = [] {
    SystemSpec spec = default_system();
    spec.nuclei = builtin_molecule(MoleculeKind::aldehyde, 5e-9);
    return validated(spec);
  }();
  return sys;
}

void BM_Sweep(benchmark::State& state) {
  const auto& sys = aldehyde();
  SweepPlan plan;
  plan.omega_grid = default_omega_grid(reference_frequency(sys));
  const auto exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(sys, plan, exec));
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Optimize(benchmark::State& state) {
  const auto sys = validated(default_system());
  const auto request = make_request(sys, OptimizerSettings{});
  const auto exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(optimize(sys, request, exec));
  state.SetLabel(state.range(0) == 0 ? "serial" : "openmp");
}
BENCHMARK(BM_Optimize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

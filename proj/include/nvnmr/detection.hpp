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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nvnmr/dynamics.hpp"
#include "nvnmr/parallel.hpp"

namespace nvnmr {

/// Differences at or below this are treated as no signal.
inline constexpr double resolution_floor = 1e-9;

/// Smallest N with delta_s >= 1/(C sqrt(N)); empty when delta_s <= 0.
/// Throws std::invalid_argument unless c lies in (0, 1].
std::optional<std::uint64_t> shots_required(double delta_s, double c);

struct DetectionOutcome {
  double delta_s = 0.0;
  double t_p = 0.0;
  std::optional<std::uint64_t> n_shots;  // empty: undetectable
  std::optional<double> total_time;      // n_shots * t_p

  bool detectable() const noexcept { return n_shots.has_value(); }
  bool operator==(const DetectionOutcome&) const = default;
};

/// Applies the resolution floor, then the shot criterion.
DetectionOutcome outcome_from_signals(double s_off, double s_on, double t_p, double c);

/// Drive-off and driven runs at seq.t_p. Throws undetectable_error when the
/// difference is at or below the resolution floor.
DetectionOutcome detection_time(const ValidatedSystem& system, const HamiltonianModel& model,
                                const PulseSequence& seq, const DriveSpec& drive, double c,
                                const EvolutionOptions& opts = {});

/// Logarithmic over [1 uT, 1 mT], 13 points.
std::vector<double> default_b_grid();
/// Linear over [0.05, 3] * t2nv, 24 points.
std::vector<double> default_t_grid(double t2nv);

struct OptimizeRequest {
  HamiltonianModel model;
  SequenceKind kind = SequenceKind::echo;
  int n = 1;
  double transition_omega = 0.0;  // rad/s
  std::vector<double> b_grid;     // T
  std::vector<double> t_grid;     // s
  double c = 0.05;
  EvolutionOptions evolution;
  int refine_iterations = 20;
};

enum class SampleTag { grid, refine };

struct SurfaceSample {
  double b_nmr;
  double t_p;
  DetectionOutcome outcome;
  SampleTag tag;
};

struct OptimizationResult {
  double best_b_nmr = 0.0;
  double best_t_p = 0.0;
  double best_time = 0.0;
  DetectionOutcome best;
  std::vector<SurfaceSample> surface;  // grid samples (b-major, ascending) then refinement samples
};

/// Grids are sorted and deduplicated first. Exhaustive grid over b_grid x
/// t_grid, then a golden-section pass in t_p between the neighbours of the
/// best grid t_p at the best b_nmr. The best
/// sample minimizes total time; ties go to smaller t_p, then smaller b_nmr.
/// Throws std::invalid_argument for empty grids, undetectable_error when no
/// sample is detectable.
OptimizationResult optimize(const ValidatedSystem& system, const OptimizeRequest& request,
                            const Execution& exec = {});

/// Optimizer configuration that stays fixed across a scan. The t_p grid is
/// expressed in units of the NV T2 of each scanned system.
struct OptimizerSettings {
  HamiltonianModel model;
  SequenceKind kind = SequenceKind::echo;
  int n = 1;
  std::optional<double> transition_omega;  // default: reference_frequency(system)
  std::vector<double> b_grid = default_b_grid();
  double t_min_factor = 0.05;
  double t_max_factor = 3.0;
  std::size_t t_points = 24;
  int refine_iterations = 20;
  EvolutionOptions evolution;
};

OptimizeRequest make_request(const ValidatedSystem& system, const OptimizerSettings& settings);

enum class ScanVariable { r_max, t2_nv };

/// Nuclei of the scanned system for a target at r_max.
using TargetPlacement = std::function<std::vector<SpinSite>(const SystemSpec& base, double r_max)>;

/// Single proton on the z axis at r_max carrying the first base nucleus's relaxation times.
std::vector<SpinSite> on_axis_proton(const SystemSpec& base, double r_max);

struct ScanPoint {
  double parameter;
  std::optional<OptimizationResult> result;
  std::string error;  // set when result is empty
};

/// optimize at every value: r_max scans replace the nuclei through `place`,
/// t2_nv scans set the NV T2. Per-point failures are recorded, not thrown.
std::vector<ScanPoint> scan(const SystemSpec& base, ScanVariable variable, std::span<const double> values,
                            const OptimizerSettings& settings, const Execution& exec = {},
                            const TargetPlacement& place = on_axis_proton);

}  // namespace nvnmr

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

#include <numbers>
#include <optional>
#include <vector>

#include "nvnmr/dynamics.hpp"
#include "nvnmr/parallel.hpp"

namespace nvnmr {

struct SweepPlan {
  std::vector<double> omega_grid;  // rad/s, strictly ascending
  std::optional<double> b_nmr;     // T; empty selects matched_drive for `seq`
  PulseSequence seq;
  HamiltonianModel model;
  EvolutionOptions evolution;
};

/// Throws std::invalid_argument for an empty or non-ascending grid, a
/// negative b_nmr or an invalid sequence.
void validate(const SweepPlan& plan);

struct SpectrumPoint {
  double omega;
  double s_on;
  double delta_s;  // s_off - s_on
};

struct Spectrum {
  std::vector<SpectrumPoint> points;
  double s_off = 1.0;
  double b_nmr = 0.0;  // resolved drive amplitude
  SweepPlan plan;
};

struct Peak {
  double omega;
  double height;
  double half_width;  // rad/s at half height
};

/// `points` samples evenly spaced over [center - half_span, center + half_span].
std::vector<double> default_omega_grid(double center, double half_span = 2.0 * std::numbers::pi * 6e4,
                                       std::size_t points = 301);

/// Drive amplitude used by a plan: the override or the matched drive for the
/// first active nucleus (proton when there is none).
double resolve_drive(const ValidatedSystem& system, const SweepPlan& plan);

/// s_off once, then one driven run per grid point in grid order.
Spectrum run_sweep(const ValidatedSystem& system, const SweepPlan& plan, const Execution& exec = {});

/// Strict interior local maxima of delta_s above `min_height`; a flat-topped
/// maximum reports its lowest-omega sample. Throws std::invalid_argument for
/// min_height <= 0.
std::vector<Peak> find_peaks(const Spectrum& spectrum, double min_height);

}  // namespace nvnmr

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

#include "nvnmr/spectroscopy.hpp"

#include <cmath>
#include <stdexcept>

namespace nvnmr {

void validate(const SweepPlan& plan) {
  if (plan.omega_grid.empty()) throw std::invalid_argument("SweepPlan: empty frequency grid");
  for (std::size_t i = 1; i < plan.omega_grid.size(); ++i) {
    if (!(plan.omega_grid[i] > plan.omega_grid[i - 1])) {
      throw std::invalid_argument("SweepPlan: frequency grid must be strictly ascending");
    }
  }
  if (plan.b_nmr && !(*plan.b_nmr >= 0.0)) throw std::invalid_argument("SweepPlan: b_nmr must be nonnegative");
  validate(plan.seq);
  validate(plan.evolution);
}

std::vector<double> default_omega_grid(double center, double half_span, std::size_t points) {
  if (points == 0) throw std::invalid_argument("default_omega_grid: no points");
  if (points == 1) return {center};
  std::vector<double> grid(points);
  const double step = 2.0 * half_span / static_cast<double>(points - 1);
  const auto mid = static_cast<double>(points - 1) / 2.0;
  for (std::size_t i = 0; i < points; ++i) grid[i] = center + (static_cast<double>(i) - mid) * step;
  return grid;
}

double resolve_drive(const ValidatedSystem& system, const SweepPlan& plan) {
  if (plan.b_nmr) return *plan.b_nmr;
  const auto& nuclei = system.active_nuclei();
  const double gamma = nuclei.empty() ? system.spec().constants.gamma_proton : nuclei.front().gamma;
  return matched_drive(plan.seq, gamma);
}

Spectrum run_sweep(const ValidatedSystem& system, const SweepPlan& plan, const Execution& exec) {
  validate(plan);
  Spectrum out;
  out.plan = plan;
  out.b_nmr = resolve_drive(system, plan);
  out.s_off = run_sequence(system, plan.model, std::nullopt, plan.seq, plan.evolution).s;

  const auto s_on = ordered_map(
      plan.omega_grid.size(),
      [&](std::size_t i) {
        const DriveSpec drive{out.b_nmr, plan.omega_grid[i], 0.0};
        return run_sequence(system, plan.model, drive, plan.seq, plan.evolution).s;
      },
      exec);

  out.points.reserve(s_on.size());
  for (std::size_t i = 0; i < s_on.size(); ++i) {
    out.points.push_back({plan.omega_grid[i], s_on[i], out.s_off - s_on[i]});
  }
  return out;
}

std::vector<Peak> find_peaks(const Spectrum& spectrum, double min_height) {
  if (!(min_height > 0.0)) throw std::invalid_argument("find_peaks: min_height must be positive");
  const auto& p = spectrum.points;
  const std::size_t n = p.size();
  std::vector<Peak> peaks;
  if (n < 3) return peaks;

  auto crossing = [&](std::size_t inside, std::size_t outside, double level) {
    const double a = p[inside].delta_s;
    const double b = p[outside].delta_s;
    const double f = (a - level) / (a - b);
    return p[inside].omega + f * (p[outside].omega - p[inside].omega);
  };

  std::size_t i = 1;
  while (i + 1 < n) {
    std::size_t j = i;
    while (j + 1 < n && p[j + 1].delta_s == p[i].delta_s) ++j;
    const double h = p[i].delta_s;
    const bool rises = p[i - 1].delta_s < h;
    const bool falls = j + 1 < n && p[j + 1].delta_s < h;
    if (rises && falls && h > min_height) {
      const double level = h / 2.0;
      std::size_t l = i;
      while (l > 0 && p[l - 1].delta_s >= level) --l;
      const double left = l > 0 ? crossing(l, l - 1, level) : p.front().omega;
      std::size_t r = j;
      while (r + 1 < n && p[r + 1].delta_s >= level) ++r;
      const double right = r + 1 < n ? crossing(r, r + 1, level) : p.back().omega;
      peaks.push_back({p[i].omega, h, (right - left) / 2.0});
    }
    i = j + 1;
  }
  return peaks;
}

}  // namespace nvnmr

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

#include "nvnmr/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nvnmr/errors.hpp"

namespace nvnmr {
namespace {

constexpr double max_shots = 1e18;

bool meets_criterion(double delta_s, double c, std::uint64_t n) {
  return delta_s * c * std::sqrt(static_cast<double>(n)) >= 1.0;
}

double time_or_inf(const DetectionOutcome& o) {
  return o.total_time ? *o.total_time : std::numeric_limits<double>::infinity();
}

// Strict weak "better than": lower time, then smaller t_p, then smaller b.
bool better(const SurfaceSample& a, const SurfaceSample& b) {
  const double ta = time_or_inf(a.outcome);
  const double tb = time_or_inf(b.outcome);
  if (ta != tb) return ta < tb;
  if (a.t_p != b.t_p) return a.t_p < b.t_p;
  return a.b_nmr < b.b_nmr;
}

DetectionOutcome evaluate(const ValidatedSystem& system, const OptimizeRequest& req, double b, double t_p,
                          double s_off) {
  const PulseSequence seq{req.kind, req.n, t_p};
  const DriveSpec drive{b, req.transition_omega, 0.0};
  const double s_on = run_sequence(system, req.model, drive, seq, req.evolution).s;
  return outcome_from_signals(s_off, s_on, t_p, req.c);
}

double drive_off(const ValidatedSystem& system, const OptimizeRequest& req, double t_p) {
  return run_sequence(system, req.model, std::nullopt, PulseSequence{req.kind, req.n, t_p}, req.evolution).s;
}

}  // namespace

std::optional<std::uint64_t> shots_required(double delta_s, double c) {
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("shots_required: C must lie in (0, 1]");
  if (!(delta_s > 0.0)) return std::nullopt;
  const double estimate = 1.0 / ((c * delta_s) * (c * delta_s));
  if (!(estimate <= max_shots)) return std::nullopt;
  auto n = static_cast<std::uint64_t>(std::max(1.0, std::ceil(estimate)));
  // ceil() of a rounded quotient can be off by one in either direction.
  while (n > 1 && meets_criterion(delta_s, c, n - 1)) --n;
  while (!meets_criterion(delta_s, c, n)) ++n;
  return n;
}

DetectionOutcome outcome_from_signals(double s_off, double s_on, double t_p, double c) {
  DetectionOutcome out;
  out.delta_s = s_off - s_on;
  out.t_p = t_p;
  if (out.delta_s > resolution_floor) {
    out.n_shots = shots_required(out.delta_s, c);
    if (out.n_shots) out.total_time = static_cast<double>(*out.n_shots) * t_p;
  }
  return out;
}

DetectionOutcome detection_time(const ValidatedSystem& system, const HamiltonianModel& model,
                                const PulseSequence& seq, const DriveSpec& drive, double c,
                                const EvolutionOptions& opts) {
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("detection_time: C must lie in (0, 1]");
  const double s_off = run_sequence(system, model, std::nullopt, seq, opts).s;
  const double s_on = run_sequence(system, model, drive, seq, opts).s;
  DetectionOutcome out = outcome_from_signals(s_off, s_on, seq.t_p, c);
  if (!out.detectable()) {
    throw undetectable_error("detection_time: signal difference " + std::to_string(out.delta_s) +
                             " is below the resolution floor");
  }
  return out;
}

std::vector<double> default_b_grid() {
  std::vector<double> grid(13);
  for (int i = 0; i < 13; ++i) grid[i] = std::pow(10.0, -6.0 + 3.0 * i / 12.0);
  return grid;
}

std::vector<double> default_t_grid(double t2nv) {
  std::vector<double> grid(24);
  for (int i = 0; i < 24; ++i) grid[i] = (0.05 + (3.0 - 0.05) * i / 23.0) * t2nv;
  return grid;
}

OptimizationResult optimize(const ValidatedSystem& system, const OptimizeRequest& request, const Execution& exec) {
  // Sorted, duplicate-free grids: the result must not depend on how the caller ordered them.
  OptimizeRequest req = request;
  for (auto* g : {&req.b_grid, &req.t_grid}) {
    std::sort(g->begin(), g->end());
    g->erase(std::unique(g->begin(), g->end()), g->end());
  }
  if (req.b_grid.empty() || req.t_grid.empty()) throw std::invalid_argument("optimize: empty grid");
  for (double b : req.b_grid) {
    if (!(b >= 0.0)) throw std::invalid_argument("optimize: b_nmr values must be nonnegative");
  }
  for (double t : req.t_grid) {
    if (!(t > 0.0)) throw std::invalid_argument("optimize: t_p values must be positive");
  }
  if (!(req.c > 0.0 && req.c <= 1.0)) throw std::invalid_argument("optimize: C must lie in (0, 1]");

  const std::size_t nb = req.b_grid.size();
  const std::size_t nt = req.t_grid.size();
  const auto s_off = ordered_map(nt, [&](std::size_t it) { return drive_off(system, req, req.t_grid[it]); }, exec);
  const auto grid = ordered_map(
      nb * nt,
      [&](std::size_t k) {
        const std::size_t ib = k / nt;
        const std::size_t it = k % nt;
        return evaluate(system, req, req.b_grid[ib], req.t_grid[it], s_off[it]);
      },
      exec);

  OptimizationResult out;
  out.surface.reserve(nb * nt + static_cast<std::size_t>(std::max(0, req.refine_iterations)) + 2);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.surface.push_back({req.b_grid[k / nt], req.t_grid[k % nt], grid[k], SampleTag::grid});
  }
  const auto best_grid = std::min_element(out.surface.begin(), out.surface.end(), better);
  if (!best_grid->outcome.detectable()) {
    throw undetectable_error("optimize: no grid point gives a detectable signal");
  }

  // Golden-section refinement in t_p at the best b_nmr.
  const double b = best_grid->b_nmr;
  const std::size_t it_best = static_cast<std::size_t>(std::distance(out.surface.begin(), best_grid)) % nt;
  if (nt > 1 && req.refine_iterations > 0) {
    double lo = req.t_grid[it_best > 0 ? it_best - 1 : 0];
    double hi = req.t_grid[std::min(it_best + 1, nt - 1)];
    auto sample = [&](double t) {
      DetectionOutcome o = evaluate(system, req, b, t, drive_off(system, req, t));
      out.surface.push_back({b, t, o, SampleTag::refine});
      return time_or_inf(o);
    };
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = sample(x1);
    double f2 = sample(x2);
    for (int iter = 2; iter < req.refine_iterations; ++iter) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - ratio * (hi - lo);
        f1 = sample(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + ratio * (hi - lo);
        f2 = sample(x2);
      }
    }
  }

  const auto best = std::min_element(out.surface.begin(), out.surface.end(), better);
  out.best = best->outcome;
  out.best_b_nmr = best->b_nmr;
  out.best_t_p = best->t_p;
  out.best_time = *best->outcome.total_time;
  return out;
}

OptimizeRequest make_request(const ValidatedSystem& system, const OptimizerSettings& s) {
  if (s.t_points == 0) throw std::invalid_argument("OptimizerSettings: t_points must be positive");
  OptimizeRequest req;
  req.model = s.model;
  req.kind = s.kind;
  req.n = s.n;
  req.transition_omega = s.transition_omega ? *s.transition_omega : reference_frequency(system);
  req.b_grid = s.b_grid;
  const double t2 = system.spec().nv.t2;
  req.t_grid.resize(s.t_points);
  for (std::size_t i = 0; i < s.t_points; ++i) {
    const double f = s.t_points == 1 ? s.t_min_factor
                                     : s.t_min_factor + (s.t_max_factor - s.t_min_factor) * static_cast<double>(i) /
                                                            static_cast<double>(s.t_points - 1);
    req.t_grid[i] = f * t2;
  }
  req.c = system.spec().collection_c;
  req.evolution = s.evolution;
  req.refine_iterations = s.refine_iterations;
  return req;
}

std::vector<SpinSite> on_axis_proton(const SystemSpec& base, double r_max) {
  SpinSite site{"H1", base.constants.gamma_proton, Vec3(0.0, 0.0, r_max), 0.5, 10e-3, 1e-3, true};
  if (!base.nuclei.empty()) {
    site.t1 = base.nuclei.front().t1;
    site.t2 = base.nuclei.front().t2;
  }
  return {site};
}

std::vector<ScanPoint> scan(const SystemSpec& base, ScanVariable variable, std::span<const double> values,
                            const OptimizerSettings& settings, const Execution& exec, const TargetPlacement& place) {
  if (values.empty()) throw std::invalid_argument("scan: empty parameter list");
  std::vector<ScanPoint> out;
  out.reserve(values.size());
  for (double v : values) {
    ScanPoint point{v, std::nullopt, {}};
    try {
      SystemSpec spec = base;
      if (variable == ScanVariable::r_max) {
        spec.nuclei = place(base, v);
      } else {
        spec.nv.t2 = v;
      }
      const ValidatedSystem system = validated(std::move(spec));
      point.result = optimize(system, make_request(system, settings), exec);
    } catch (const std::exception& e) {
      point.error = e.what();
    }
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace nvnmr

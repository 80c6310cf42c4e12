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

#include <limits>
#include <map>
#include <vector>

#include "nvnmr/quantum_core.hpp"

namespace nvnmr {

enum class Backend { exact_piecewise, stepped };

struct EvolutionOptions {
  Backend backend = Backend::exact_piecewise;
  /// Upper bound on the stepped-backend step, seconds. The automatic bound
  /// 1/(50 f_max) applies as well; the smaller of the two wins.
  double max_step = std::numeric_limits<double>::infinity();
  /// Largest accepted trace drift over one evolve call.
  double tolerance = 1e-9;

  bool operator==(const EvolutionOptions&) const = default;
};

/// Throws std::invalid_argument unless max_step > 0 and tolerance in (0, 1e-3].
void validate(const EvolutionOptions& opts);

enum class Waveform { cosine, sine };

/// A superoperator scaled by cos(omega t + phase) or sin(omega t + phase).
struct ModulatedTerm {
  Superoperator op;
  double omega = 0.0;  // rad/s
  double phase = 0.0;  // rad
  Waveform waveform = Waveform::cosine;

  double factor(double t) const;
};

/// L(t) = L0 + sum_k f_k(t) L_k.
class Generator {
 public:
  explicit Generator(Superoperator base, std::vector<ModulatedTerm> terms = {});

  int dim() const noexcept { return base_.dim; }
  bool is_constant() const noexcept { return terms_.empty(); }
  const Superoperator& base() const noexcept { return base_; }
  const std::vector<ModulatedTerm>& terms() const noexcept { return terms_; }

  CMatrix at(double t) const;
  CVector apply(double t, const CVector& v) const;

  /// Largest frequency scale present, Hz: max of the generator norm bound
  /// and the modulation frequencies, divided by 2 pi.
  double max_frequency() const;

 private:
  Superoperator base_;
  std::vector<ModulatedTerm> terms_;
};

/// Memoized exp(L tau) keyed by the exact duration. Bound to one constant
/// generator; not safe for concurrent use, so keep one per worker.
class PropagatorCache {
 public:
  const CMatrix& propagator(const Generator& gen, double duration);
  std::size_t size() const noexcept { return cache_.size(); }

 private:
  std::map<double, CMatrix> cache_;
};

/// Evolves rho for `duration` seconds starting at absolute time `t0`.
///
/// exact_piecewise exponentiates the superoperator and requires a constant
/// generator. stepped runs classical RK4 on vec(rho); for a constant
/// generator the RK4 step polynomial is formed once and reused.
///
/// Throws std::invalid_argument for a negative duration, mismatched
/// dimensions or an exact request on a time-dependent generator, and
/// computation_error on step-size underflow or trace drift above tolerance.
DensityMatrix evolve(const DensityMatrix& rho, const Generator& gen, double duration, const EvolutionOptions& opts,
                     double t0 = 0.0, PropagatorCache* cache = nullptr);

}  // namespace nvnmr

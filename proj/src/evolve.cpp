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

#include "nvnmr/evolve.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nvnmr/errors.hpp"
#include "nvnmr/matexp.hpp"

namespace nvnmr {
namespace {

constexpr double max_steps = 5e8;
constexpr double steps_per_period = 50.0;

double one_norm(const CMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

void validate(const EvolutionOptions& opts) {
  if (!(opts.max_step > 0.0)) throw std::invalid_argument("EvolutionOptions: max_step must be positive");
  if (!(opts.tolerance > 0.0 && opts.tolerance <= 1e-3)) {
    throw std::invalid_argument("EvolutionOptions: tolerance must lie in (0, 1e-3]");
  }
}

double ModulatedTerm::factor(double t) const {
  const double arg = omega * t + phase;
  return waveform == Waveform::cosine ? std::cos(arg) : std::sin(arg);
}

Generator::Generator(Superoperator base, std::vector<ModulatedTerm> terms)
    : base_(std::move(base)), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.op.dim != base_.dim || t.op.matrix.rows() != base_.matrix.rows()) {
      throw std::invalid_argument("Generator: modulated term dimension mismatch");
    }
  }
}

CMatrix Generator::at(double t) const {
  CMatrix out = base_.matrix;
  for (const auto& term : terms_) out += term.factor(t) * term.op.matrix;
  return out;
}

CVector Generator::apply(double t, const CVector& v) const {
  CVector out = base_.matrix * v;
  for (const auto& term : terms_) out.noalias() += term.factor(t) * (term.op.matrix * v);
  return out;
}

double Generator::max_frequency() const {
  double norm = one_norm(base_.matrix);
  double omega = 0.0;
  for (const auto& term : terms_) {
    norm += one_norm(term.op.matrix);
    omega = std::max(omega, std::abs(term.omega));
  }
  return std::max(norm, omega) / (2.0 * std::numbers::pi);
}

const CMatrix& PropagatorCache::propagator(const Generator& gen, double duration) {
  auto it = cache_.find(duration);
  if (it == cache_.end()) it = cache_.emplace(duration, matexp(gen.base().matrix * duration)).first;
  return it->second;
}

DensityMatrix evolve(const DensityMatrix& rho, const Generator& gen, double duration, const EvolutionOptions& opts,
                     double t0, PropagatorCache* cache) {
  if (!(duration >= 0.0)) throw std::invalid_argument("evolve: negative duration");
  if (rho.dim() != gen.dim()) throw std::invalid_argument("evolve: state and generator dimensions differ");
  validate(opts);
  if (duration == 0.0) return rho;

  const CVector v0 = rho.vectorized();
  CVector v;
  if (opts.backend == Backend::exact_piecewise) {
    if (!gen.is_constant()) {
      throw std::invalid_argument("evolve: exact_piecewise backend needs a constant generator");
    }
    if (cache != nullptr) {
      v = cache->propagator(gen, duration) * v0;
    } else {
      v = matexp(gen.base().matrix * duration) * v0;
    }
  } else {
    const double f_max = gen.max_frequency();
    double h = opts.max_step;
    if (f_max > 0.0) h = std::min(h, 1.0 / (steps_per_period * f_max));
    if (!std::isfinite(h)) h = duration;
    const double n_steps = std::ceil(duration / h);
    if (!(n_steps <= max_steps)) {
      throw computation_error("evolve: step-size underflow (" + std::to_string(n_steps) + " steps requested)");
    }
    const auto steps = static_cast<long>(n_steps);
    h = duration / static_cast<double>(steps);

    v = v0;
    if (gen.is_constant()) {
      // For a linear system one RK4 step is the degree-4 Taylor polynomial of exp(hL).
      const auto n = gen.base().matrix.rows();
      const CMatrix hl = h * gen.base().matrix;
      CMatrix step = CMatrix::Identity(n, n);
      CMatrix term = CMatrix::Identity(n, n);
      for (int k = 1; k <= 4; ++k) {
        term = (term * hl) / static_cast<double>(k);
        step += term;
      }
      for (long s = 0; s < steps; ++s) v = step * v;
    } else {
      for (long s = 0; s < steps; ++s) {
        const double t = t0 + h * static_cast<double>(s);
        const CVector k1 = gen.apply(t, v);
        const CVector k2 = gen.apply(t + 0.5 * h, v + 0.5 * h * k1);
        const CVector k3 = gen.apply(t + 0.5 * h, v + 0.5 * h * k2);
        const CVector k4 = gen.apply(t + h, v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
  }

  DensityMatrix out = DensityMatrix::from_vectorized(v, rho.subsystem_dims());
  const double drift = std::abs(out.trace() - rho.trace());
  if (drift > opts.tolerance) {
    throw computation_error("evolve: trace drift " + std::to_string(drift) + " exceeds tolerance");
  }
  return out;
}

}  // namespace nvnmr

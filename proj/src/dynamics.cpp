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

#include "nvnmr/dynamics.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nvnmr/matexp.hpp"

namespace nvnmr {
namespace {

constexpr double pi = std::numbers::pi;

void add_spin_channels(const SpinSite& site, std::size_t index, std::span<const int> dims,
                       std::vector<LindbladChannel>& out) {
  const SpinOperators half = spin_operators(0.5);
  if (std::isfinite(site.t1)) {
    const double rate = 1.0 / (2.0 * site.t1);
    out.push_back({embed(half.raising(), index, dims), rate});
    out.push_back({embed(half.lowering(), index, dims), rate});
  }
  const double t1_rate = std::isfinite(site.t1) ? 1.0 / site.t1 : 0.0;
  const double t2_rate = std::isfinite(site.t2) ? 1.0 / site.t2 : 0.0;
  const double dephasing = 2.0 * t2_rate - t1_rate;
  if (dephasing > 0.0) out.push_back({embed(half.z, index, dims), dephasing});
}

struct NvPulses {
  CMatrix half_y;
  CMatrix pi_x;
  CMatrix half_minus_y;
};

NvPulses nv_pulses(std::span<const int> dims) {
  const SpinOperators half = spin_operators(0.5);
  const complex i(0, 1);
  return {
      embed(matexp(-i * (pi / 2) * half.y), 0, dims),
      embed(matexp(-i * pi * half.x), 0, dims),
      embed(matexp(i * (pi / 2) * half.y), 0, dims),
  };
}

DensityMatrix rotate(const DensityMatrix& rho, const CMatrix& u) {
  return {u * rho.matrix() * u.adjoint(), rho.subsystem_dims()};
}

std::vector<double> pulse_times_unchecked(const PulseSequence& seq) {
  std::vector<double> times;
  const int n = seq.pulse_count();
  times.reserve(n);
  for (int k = 1; k <= n; ++k) {
    switch (seq.kind) {
      case SequenceKind::echo:
        times.push_back(seq.t_p / 2.0);
        break;
      case SequenceKind::cpmg:
        times.push_back(seq.t_p * (2.0 * k - 1.0) / (2.0 * n));
        break;
      case SequenceKind::uhrig: {
        const double s = std::sin(pi * k / (2.0 * n + 2.0));
        times.push_back(seq.t_p * s * s);
        break;
      }
    }
  }
  return times;
}

// Accepts t_p = 0 (the pulses then compose to the identity on |0>).
SignalResult simulate(const ValidatedSystem& system, const HamiltonianModel& model,
                      const std::optional<DriveSpec>& drive, const PulseSequence& seq,
                      const EvolutionOptions& opts) {
  validate(opts);
  if (model.frame == Frame::lab_nuclear && opts.backend != Backend::stepped) {
    throw std::invalid_argument("run_sequence: the lab_nuclear frame needs the stepped backend");
  }
  std::optional<DriveSpec> effective = drive;
  if (model.frame == Frame::rotating_secular && !effective) {
    effective = DriveSpec{0.0, reference_frequency(system), 0.0};
  }

  const HamiltonianParts parts = hamiltonian_parts(system, model, effective);
  const auto channels = decoherence_channels(system);
  std::vector<ModulatedTerm> terms;
  if (!parts.is_static()) {
    terms.push_back({hamiltonian_superoperator(parts.drive_cos), parts.omega, parts.phase, Waveform::cosine});
    terms.push_back({hamiltonian_superoperator(parts.drive_sin), parts.omega, parts.phase, Waveform::sine});
  }
  const Generator gen(liouvillian(parts.static_part, channels), std::move(terms));
  const NvPulses pulses = nv_pulses(parts.dims);

  std::vector<int> nuclear_dims(parts.dims.begin() + 1, parts.dims.end());
  CMatrix rho0 = CMatrix::Zero(1 << parts.dims.size(), 1 << parts.dims.size());
  {
    CMatrix nv0 = CMatrix::Zero(2, 2);
    nv0(0, 0) = 1.0;
    const int dn = 1 << nuclear_dims.size();
    rho0 = kron(nv0, CMatrix::Identity(dn, dn) / static_cast<double>(dn));
  }
  DensityMatrix rho(std::move(rho0), parts.dims);
  rho = rotate(rho, pulses.half_y);

  // Segment boundaries; durations equal to within rounding share one cache entry.
  std::vector<double> bounds{0.0};
  if (seq.t_p > 0.0) {
    for (double t : pulse_times_unchecked(seq)) bounds.push_back(t);
  } else {
    bounds.insert(bounds.end(), seq.pulse_count(), 0.0);
  }
  bounds.push_back(seq.t_p);

  PropagatorCache cache;
  std::vector<double> seen;
  SignalResult result{1.0, rho, {}};
  for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
    double dt = bounds[k + 1] - bounds[k];
    for (double s : seen) {
      if (std::abs(s - dt) <= 1e-13 * seq.t_p) {
        dt = s;
        break;
      }
    }
    seen.push_back(dt);
    const auto start = std::chrono::steady_clock::now();
    rho = evolve(rho, gen, dt, opts, bounds[k], gen.is_constant() ? &cache : nullptr);
    result.wall_segments.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    if (k + 2 < bounds.size()) rho = rotate(rho, pulses.pi_x);
  }
  rho = rotate(rho, pulses.half_minus_y);

  const std::size_t keep[] = {0};
  result.s = partial_trace(rho, keep).matrix()(0, 0).real();
  result.rho_final = std::move(rho);
  return result;
}

}  // namespace

void validate(const PulseSequence& seq) {
  if (!(seq.t_p > 0.0) || !std::isfinite(seq.t_p)) throw std::invalid_argument("PulseSequence: t_p must be positive");
  if (seq.n < 1) throw std::invalid_argument("PulseSequence: n must be at least 1");
}

std::vector<double> pulse_times(const PulseSequence& seq) {
  validate(seq);
  return pulse_times_unchecked(seq);
}

double matched_drive(const PulseSequence& seq, double gamma) {
  validate(seq);
  const double rabi_hz = seq.pulse_count() / seq.t_p;
  return 2.0 * pi * rabi_hz / gamma;
}

std::vector<LindbladChannel> decoherence_channels(const ValidatedSystem& system) {
  const std::size_t n = system.active_nuclei().size();
  const std::vector<int> dims(n + 1, 2);
  std::vector<LindbladChannel> out;
  add_spin_channels(system.spec().nv, 0, dims, out);
  for (std::size_t i = 0; i < n; ++i) add_spin_channels(system.active_nuclei()[i], i + 1, dims, out);
  return out;
}

double reference_frequency(const ValidatedSystem& system) {
  const auto& nuclei = system.active_nuclei();
  const double gamma = nuclei.empty() ? system.spec().constants.gamma_proton : nuclei.front().gamma;
  return gamma * system.spec().b0;
}

SignalResult run_sequence(const ValidatedSystem& system, const HamiltonianModel& model,
                          const std::optional<DriveSpec>& drive, const PulseSequence& seq,
                          const EvolutionOptions& opts) {
  validate(seq);
  return simulate(system, model, drive, seq, opts);
}

std::vector<EnvelopePoint> baseline_curve(const ValidatedSystem& system, const HamiltonianModel& model,
                                          SequenceKind kind, int n, std::span<const double> t_grid,
                                          const EvolutionOptions& opts) {
  if (t_grid.empty()) throw std::invalid_argument("baseline_curve: empty grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      throw std::invalid_argument("baseline_curve: grid must be nonnegative and strictly ascending");
    }
  }
  if (n < 1) throw std::invalid_argument("baseline_curve: n must be at least 1");
  std::vector<EnvelopePoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    out.push_back({t, simulate(system, model, std::nullopt, PulseSequence{kind, n, t}, opts).s});
  }
  return out;
}

}  // namespace nvnmr

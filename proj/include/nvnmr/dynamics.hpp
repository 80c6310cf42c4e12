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

#include <optional>
#include <span>
#include <vector>

#include "nvnmr/evolve.hpp"
#include "nvnmr/hamiltonian.hpp"
#include "nvnmr/quantum_core.hpp"
#include "nvnmr/spin_system.hpp"

namespace nvnmr {

enum class SequenceKind { echo, cpmg, uhrig };

/// NV control sequence of ideal pi pulses; t_p is the total duration.
struct PulseSequence {
  SequenceKind kind = SequenceKind::echo;
  int n = 1;  // pi pulses for cpmg/uhrig; echo always has one
  double t_p = 1e-3;

  int pulse_count() const noexcept { return kind == SequenceKind::echo ? 1 : n; }
  bool operator==(const PulseSequence&) const = default;
};

/// Throws std::invalid_argument unless t_p > 0 and n >= 1.
void validate(const PulseSequence& seq);

/// pi-pulse instants in (0, t_p), ascending.
///   echo:     t_p / 2
///   cpmg(n):  t_p (2k - 1) / (2n)
///   uhrig(n): t_p sin^2(pi k / (2n + 2))        k = 1..n
std::vector<double> pulse_times(const PulseSequence& seq);

/// Drive amplitude (T) whose on-resonance Rabi frequency is pulse_count / t_p Hz.
double matched_drive(const PulseSequence& seq, double gamma);

/// Lindblad channels for the NV and every active nucleus on the register
/// {NV, nuclei...}: S+ and S- at 1/(2 T1) each, plus S_z dephasing at
/// 2/T2 - 1/T1 so that an isolated spin's coherence decays as exp(-t/T2).
std::vector<LindbladChannel> decoherence_channels(const ValidatedSystem& system);

/// Frame frequency used for drive-off runs in the rotating frame: the Larmor
/// frequency of the first active nucleus (proton Larmor when there is none).
double reference_frequency(const ValidatedSystem& system);

struct SignalResult {
  double s = 1.0;  // population of NV |0> after the final pi/2
  DensityMatrix rho_final;
  std::vector<double> wall_segments;  // seconds of wall time per free-evolution segment
};

/// (pi/2)_y - free evolution with pi_x at each pulse time - (pi/2)_-y, starting from
/// |0><0| (x) I/2^n, with the drive on throughout. The lab_nuclear frame
/// requires the stepped backend (std::invalid_argument otherwise).
SignalResult run_sequence(const ValidatedSystem& system, const HamiltonianModel& model,
                          const std::optional<DriveSpec>& drive, const PulseSequence& seq,
                          const EvolutionOptions& opts);

struct EnvelopePoint {
  double t_p;
  double s;
};

/// Drive-off signal over an ascending grid of t_p >= 0 (t_p = 0 gives S = 1).
std::vector<EnvelopePoint> baseline_curve(const ValidatedSystem& system, const HamiltonianModel& model,
                                          SequenceKind kind, int n, std::span<const double> t_grid,
                                          const EvolutionOptions& opts);

}  // namespace nvnmr

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
#include <vector>

#include <Eigen/Core>

#include "nvnmr/quantum_core.hpp"
#include "nvnmr/spin_system.hpp"

namespace nvnmr {

enum class Frame { lab_nuclear, rotating_secular };
enum class NvCoupling { zz_only, full_secular };

struct HamiltonianModel {
  Frame frame = Frame::rotating_secular;
  NvCoupling nv_coupling = NvCoupling::full_secular;
  bool include_nuclear_dipolar = true;

  bool operator==(const HamiltonianModel&) const = default;
};

/// Circularly polarized drive B_NMR [x cos(omega t + phase) + y sin(omega t + phase)].
struct DriveSpec {
  double b_nmr = 0.0;  // T
  double omega = 0.0;  // rad/s
  double phase = 0.0;  // rad

  bool operator==(const DriveSpec&) const = default;
};

/// Secular NV-nucleus coupling, rad/s, signed:
/// gamma_nv gamma hbar (mu0/4pi) r^-3 (1 - 3 z^2/r^2).
/// Throws std::domain_error for |position| <= 0.1 nm.
double coupling_k(const Vec3& position, const PhysicalConstants& c);
double coupling_k(const Vec3& position, const PhysicalConstants& c, double gamma_target);

/// z-axis intercept of the iso-|k| shell through `position`.
/// Throws std::domain_error where k vanishes (magic angle).
double r_max_of(const Vec3& position, const PhysicalConstants& c);
double r_max_of(const Vec3& position, const PhysicalConstants& c, double gamma_target);

/// D_ab = gamma_i gamma_j hbar (mu0/4pi) r^-3 (delta_ab - 3 rhat_a rhat_b), rad/s,
/// so that H = sum_ab S_i^a D_ab S_j^b. Throws std::domain_error for |r| <= 0.1 Angstrom.
Eigen::Matrix3d dipolar_tensor(const Vec3& r, double gamma_i, double gamma_j, const PhysicalConstants& c);

/// H(t) = static_part + cos(omega t + phase) drive_cos + sin(omega t + phase) drive_sin.
/// In the rotating frame both drive parts are zero and everything is static.
struct HamiltonianParts {
  std::vector<int> dims;  // {2, 2, ..., 2}: NV qubit first, then active nuclei
  CMatrix static_part;
  CMatrix drive_cos;
  CMatrix drive_sin;
  double omega = 0.0;
  double phase = 0.0;

  bool is_static() const;
  CMatrix at(double t) const;
};

/// Splits the system Hamiltonian (rad/s) for the chosen frame and
/// approximation level. The NV enters as the qubit {|0>, |-1>} with its own
/// Zeeman and zero-field terms removed by the microwave frame, Z_nv = sigma_z / 2.
/// Inactive nuclei are not part of the register.
/// Throws std::invalid_argument when the rotating frame has no drive.
HamiltonianParts hamiltonian_parts(const ValidatedSystem& system, const HamiltonianModel& model,
                                   const std::optional<DriveSpec>& drive);

CMatrix build_hamiltonian(const ValidatedSystem& system, const HamiltonianModel& model,
                          const std::optional<DriveSpec>& drive, double t);

}  // namespace nvnmr

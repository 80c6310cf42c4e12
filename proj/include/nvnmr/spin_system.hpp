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
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nvnmr/errors.hpp"

namespace nvnmr {

using Vec3 = Eigen::Vector3d;

/// SI values; gyromagnetic ratios are magnitudes in rad/s/T.
struct PhysicalConstants {
  double gamma_nv = 1.76085963023e11;
  double gamma_proton = 2.6752218744e8;
  double mu0_over_4pi = 1e-7;
  double hbar = 1.054571817e-34;
  double delta_zfs = 2.0 * std::numbers::pi * 2.87e9;

  bool operator==(const PhysicalConstants&) const = default;
};

struct SpinSite {
  std::string label;
  double gamma = 0.0;     // rad/s/T
  Vec3 position = Vec3::Zero();  // m
  double spin = 0.5;
  double t1 = std::numeric_limits<double>::infinity();  // s; infinity disables the channel
  double t2 = std::numeric_limits<double>::infinity();  // s
  bool active = true;

  bool operator==(const SpinSite& o) const {
    return label == o.label && gamma == o.gamma && position == o.position && spin == o.spin && t1 == o.t1 &&
           t2 == o.t2 && active == o.active;
  }
};

/// Background field b0 points along +z, the NV quantization axis. The NV
/// site sits at the origin and is treated as the {|0>, |-1>} qubit.
struct SystemSpec {
  double b0 = 0.01;  // T
  SpinSite nv;
  std::vector<SpinSite> nuclei;
  PhysicalConstants constants;
  double collection_c = 0.05;

  bool operator==(const SystemSpec&) const = default;
};

inline constexpr std::size_t max_active_nuclei = 5;

/// NV site with the default relaxation times (T1 = 5 ms, T2 = 1 ms).
SpinSite default_nv_site(const PhysicalConstants& constants = {});

/// Default scene: a single proton on the z axis at 5 nm.
SystemSpec default_system();

/// Every broken invariant, in a stable order. Empty means valid.
std::vector<Violation> validate(const SystemSpec& spec);

/// A SystemSpec that passed `validate`. Only `validated` constructs one.
class ValidatedSystem {
 public:
  const SystemSpec& spec() const noexcept { return spec_; }
  const std::vector<SpinSite>& active_nuclei() const noexcept { return active_; }

  friend ValidatedSystem validated(SystemSpec spec);

 private:
  explicit ValidatedSystem(SystemSpec spec);
  SystemSpec spec_;
  std::vector<SpinSite> active_;
};

/// Throws validation_error listing every violation.
ValidatedSystem validated(SystemSpec spec);

double larmor_frequency(const SpinSite& site, double b0);

enum class MoleculeKind { aldehyde, hydroxymethyl, methyl };

/// Rigid group geometry. Lengths in m, angles in rad.
struct MoleculeGeometry {
  double ch_bond = 1.09e-10;
  double aldehyde_ch_bond = 1.11e-10;
  double aldehyde_angle = 120.0 * std::numbers::pi / 180.0;  // H-C vs the surface bond
  double tetrahedral_angle = 109.47 * std::numbers::pi / 180.0;
  double co_bond = 1.43e-10;
  double oh_bond = 0.96e-10;

  bool operator==(const MoleculeGeometry&) const = default;
};

struct NuclearRelaxation {
  double t1 = 10e-3;
  double t2 = 1e-3;

  bool operator==(const NuclearRelaxation&) const = default;
};

/// Protons of a surface-bound group. The anchor carbon sits at
/// (0, 0, standoff); its bond to the diamond points along -z; the group is
/// rotated by `azimuth` about z. The hydroxyl proton of hydroxymethyl is
/// returned inactive. Throws std::invalid_argument for a standoff outside
/// [1 nm, 50 nm].
std::vector<SpinSite> builtin_molecule(MoleculeKind kind, double standoff, double azimuth = 0.0,
                                       const NuclearRelaxation& relaxation = {},
                                       const MoleculeGeometry& geometry = {},
                                       const PhysicalConstants& constants = {});

}  // namespace nvnmr

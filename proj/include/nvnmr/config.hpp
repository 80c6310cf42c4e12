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

// Run configuration: a nested YAML document in human units.
//
//   system:
//     b0: 10 mT
//     collection_efficiency: 0.05
//     nv: {t1: 5 ms, t2: 1 ms}
//     nuclear: {t1: 10 ms, t2: 1 ms}
//     molecule: {kind: proton, standoff: 5 nm, azimuth: 0 deg}
//   model: {frame: rotating_secular, nv_coupling: full_secular, nuclear_dipolar: true}
//   sequence: {kind: echo, n: 1, t_p: 1 ms}
//   evolution: {backend: exact_piecewise, max_step: inf, tolerance: 1e-9}
//   sweep: {center: larmor, half_span: 60 kHz, points: 301, b_nmr: matched}
//   baseline: {t_min: 0 ms, t_max: 3 ms, points: 61, b_nmr: matched}
//   optimize: {b_min: 1 uT, b_max: 1 mT, b_points: 13, t_min: 0.05, t_max: 3, t_points: 24,
//              refine_iterations: 20, transition: larmor}
//   scan: {r_max: [3, 4, 5, 6], t2_nv: [0.25, 0.5, 1]}
//   peaks: {min_height: 1e-3}
//
// Every key is optional. Optimizer t_min/t_max are multiples of the NV T2.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nvnmr/detection.hpp"
#include "nvnmr/spectroscopy.hpp"

namespace nvnmr {

enum class MoleculeChoice { proton, aldehyde, hydroxymethyl, methyl, custom };

struct CustomSite {
  std::string label;
  Vec3 position = Vec3::Zero();  // m
  std::optional<double> gamma;   // rad/s/T, default proton
  std::optional<double> t1;      // s, default system.nuclear
  std::optional<double> t2;
  bool active = true;

  bool operator==(const CustomSite& o) const {
    return label == o.label && position == o.position && gamma == o.gamma && t1 == o.t1 && t2 == o.t2 &&
           active == o.active;
  }
};

struct MoleculeConfig {
  MoleculeChoice kind = MoleculeChoice::proton;
  double standoff = 5e-9;  // m; for `proton` this is the on-axis height
  double azimuth = 0.0;    // rad
  std::vector<CustomSite> sites;

  bool operator==(const MoleculeConfig&) const = default;
};

struct SystemConfig {
  double b0 = 0.01;
  double collection_efficiency = 0.05;
  double nv_t1 = 5e-3;
  double nv_t2 = 1e-3;
  double nuclear_t1 = 10e-3;
  double nuclear_t2 = 1e-3;
  MoleculeConfig molecule;

  bool operator==(const SystemConfig&) const = default;
};

struct SweepConfig {
  std::optional<double> center;  // rad/s; empty: Larmor of the first active nucleus
  double half_span = 2.0 * std::numbers::pi * 6e4;
  std::size_t points = 301;
  std::optional<double> b_nmr;  // T; empty: matched drive

  bool operator==(const SweepConfig&) const = default;
};

struct BaselineConfig {
  double t_min = 0.0;
  double t_max = 3e-3;
  std::size_t points = 61;
  std::optional<double> b_nmr;  // driven companion curve; empty: matched at each t_p

  bool operator==(const BaselineConfig&) const = default;
};

struct OptimizeConfig {
  double b_min = 1e-6;
  double b_max = 1e-3;
  std::size_t b_points = 13;
  double t_min_factor = 0.05;
  double t_max_factor = 3.0;
  std::size_t t_points = 24;
  int refine_iterations = 20;
  std::optional<double> transition;  // rad/s; empty: Larmor

  bool operator==(const OptimizeConfig&) const = default;
};

struct ScanConfig {
  std::vector<double> r_max{3e-9, 4e-9, 5e-9, 6e-9};
  std::vector<double> t2_nv{0.25e-3, 0.5e-3, 1e-3};

  bool operator==(const ScanConfig&) const = default;
};

struct PeaksConfig {
  double min_height = 1e-3;

  bool operator==(const PeaksConfig&) const = default;
};

struct RunConfig {
  SystemConfig system;
  HamiltonianModel model;
  PulseSequence sequence;
  EvolutionOptions evolution;
  SweepConfig sweep;
  BaselineConfig baseline;
  OptimizeConfig optimize;
  ScanConfig scan;
  PeaksConfig peaks;

  bool operator==(const RunConfig&) const = default;
};

/// Parses YAML (or JSON) text. `overrides` are "dotted.key=value" strings
/// applied to the document before conversion, so they go through the same
/// checks. Throws config_error with line/column for syntax errors, type
/// errors and unknown keys, and validation_error listing every violation.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// parse_config on a file's contents; io_error when unreadable.
RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// Every violation of the whole config, including the physical system.
std::vector<Violation> validate(const RunConfig& config);

/// The nuclei placed by system.molecule at its standoff.
std::vector<SpinSite> molecule_sites(const SystemConfig& system, const PhysicalConstants& constants = {});
/// Same molecule with its anchor (or the proton) at height `r`.
std::vector<SpinSite> molecule_sites_at(const SystemConfig& system, double r, const PhysicalConstants& constants = {});

SystemSpec to_system_spec(const RunConfig& config);
SweepPlan to_sweep_plan(const RunConfig& config, const ValidatedSystem& system);
OptimizerSettings to_optimizer_settings(const RunConfig& config);

/// Fully resolved config in SI units with unit strings; parse_config(dump)
/// reproduces `config` exactly.
nlohmann::json to_json(const RunConfig& config);

/// FNV-1a of the canonical JSON form, 16 hex digits.
std::string config_hash(const RunConfig& config, const std::string& salt = "");

}  // namespace nvnmr

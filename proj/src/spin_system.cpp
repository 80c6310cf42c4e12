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

#include "nvnmr/spin_system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nvnmr {
namespace {

constexpr double min_nv_distance = 1e-10;    // coupling_k is invalid closer than this
constexpr double min_pair_distance = 1e-11;  // dipolar_tensor needs separations above 0.1 Angstrom

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void check_relaxation(const SpinSite& s, const std::string& field, std::vector<Violation>& out) {
  if (!(s.t1 > 0.0)) out.push_back({field + ".t1", "T1 must be positive"});
  if (!(s.t2 > 0.0)) out.push_back({field + ".t2", "T2 must be positive"});
  if (s.t1 > 0.0 && s.t2 > 0.0 && s.t2 > 2.0 * s.t1) {
    out.push_back({field + ".t2", "T2 (" + fmt_double(s.t2) + " s) exceeds 2*T1 (" + fmt_double(2.0 * s.t1) +
                                      " s) for site '" + s.label + "'"});
  }
}

Vec3 direction(double polar, double azimuth) {
  return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

SpinSite proton(std::string label, Vec3 position, const NuclearRelaxation& relax, const PhysicalConstants& c,
                bool active = true) {
  return {std::move(label), c.gamma_proton, position, 0.5, relax.t1, relax.t2, active};
}

}  // namespace

SpinSite default_nv_site(const PhysicalConstants& constants) {
  return {"NV", constants.gamma_nv, Vec3::Zero(), 1.0, 5e-3, 1e-3, true};
}

SystemSpec default_system() {
  SystemSpec spec;
  spec.nv = default_nv_site(spec.constants);
  spec.nuclei.push_back(proton("H1", {0.0, 0.0, 5e-9}, NuclearRelaxation{}, spec.constants));
  return spec;
}

std::vector<Violation> validate(const SystemSpec& spec) {
  std::vector<Violation> out;
  const auto& c = spec.constants;
  if (!(c.gamma_nv > 0.0)) out.push_back({"constants.gamma_nv", "must be positive"});
  if (!(c.gamma_proton > 0.0)) out.push_back({"constants.gamma_proton", "must be positive"});
  if (!(c.mu0_over_4pi > 0.0)) out.push_back({"constants.mu0_over_4pi", "must be positive"});
  if (!(c.hbar > 0.0)) out.push_back({"constants.hbar", "must be positive"});
  if (!(c.delta_zfs > 0.0)) out.push_back({"constants.delta_zfs", "must be positive"});
  if (!std::isfinite(spec.b0)) out.push_back({"b0", "must be finite"});
  if (!(spec.collection_c > 0.0 && spec.collection_c <= 1.0)) {
    out.push_back({"collection_c", "must lie in (0, 1], got " + fmt_double(spec.collection_c)});
  }

  if (spec.nv.position != Vec3::Zero()) out.push_back({"nv.position", "NV must sit at the origin"});
  if (!(spec.nv.gamma > 0.0)) out.push_back({"nv.gamma", "must be positive"});
  check_relaxation(spec.nv, "nv", out);

  std::size_t active = 0;
  for (std::size_t i = 0; i < spec.nuclei.size(); ++i) {
    const auto& s = spec.nuclei[i];
    const std::string field = "nuclei[" + std::to_string(i) + "]";
    if (s.active) ++active;
    if (!(s.gamma > 0.0)) out.push_back({field + ".gamma", "must be positive"});
    if (s.spin != 0.5) out.push_back({field + ".spin", "only spin-1/2 nuclei are supported"});
    check_relaxation(s, field, out);
    if (!s.position.allFinite()) {
      out.push_back({field + ".position", "must be finite"});
    } else if (s.position.norm() < min_nv_distance) {
      out.push_back({field + ".position", "site '" + s.label + "' lies at the NV origin"});
    }
  }
  for (std::size_t i = 0; i < spec.nuclei.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.nuclei.size(); ++j) {
      const double d = (spec.nuclei[i].position - spec.nuclei[j].position).norm();
      if (d < min_pair_distance) {
        out.push_back({"nuclei[" + std::to_string(i) + "],nuclei[" + std::to_string(j) + "]",
                       "sites '" + spec.nuclei[i].label + "' and '" + spec.nuclei[j].label + "' coincide"});
      }
    }
  }
  if (active > max_active_nuclei) {
    out.push_back({"nuclei", std::to_string(active) + " active nuclei exceed the limit of " +
                                 std::to_string(max_active_nuclei)});
  }
  return out;
}

ValidatedSystem::ValidatedSystem(SystemSpec spec) : spec_(std::move(spec)) {
  for (const auto& s : spec_.nuclei) {
    if (s.active) active_.push_back(s);
  }
}

ValidatedSystem validated(SystemSpec spec) {
  auto violations = validate(spec);
  if (!violations.empty()) throw validation_error(std::move(violations));
  return ValidatedSystem(std::move(spec));
}

double larmor_frequency(const SpinSite& site, double b0) { return site.gamma * b0; }

std::vector<SpinSite> builtin_molecule(MoleculeKind kind, double standoff, double azimuth,
                                       const NuclearRelaxation& relax, const MoleculeGeometry& g,
                                       const PhysicalConstants& c) {
  if (!(standoff >= 1e-9 && standoff <= 50e-9)) {
    throw std::invalid_argument("builtin_molecule: standoff must lie in [1 nm, 50 nm]");
  }
  const Vec3 anchor(0.0, 0.0, standoff);
  // Substituents make the tetrahedral angle with the surface bond (-z).
  const double polar = std::numbers::pi - g.tetrahedral_angle;
  const double third = 2.0 * std::numbers::pi / 3.0;

  std::vector<SpinSite> sites;
  switch (kind) {
    case MoleculeKind::aldehyde: {
      const double tilt = std::numbers::pi - g.aldehyde_angle;
      sites.push_back(proton("H1", anchor + g.aldehyde_ch_bond * direction(tilt, azimuth), relax, c));
      break;
    }
    case MoleculeKind::methyl:
      for (int k = 0; k < 3; ++k) {
        sites.push_back(proton("H" + std::to_string(k + 1),
                               anchor + g.ch_bond * direction(polar, azimuth + k * third), relax, c));
      }
      break;
    case MoleculeKind::hydroxymethyl: {
      for (int k = 0; k < 2; ++k) {
        sites.push_back(proton("H" + std::to_string(k + 1),
                               anchor + g.ch_bond * direction(polar, azimuth + k * third), relax, c));
      }
      const Vec3 bond = direction(polar, azimuth + 2.0 * third);
      const Vec3 oxygen = anchor + g.co_bond * bond;
      // Hydroxyl H in the vertical plane through C-O, C-O-H at the tetrahedral angle.
      const Vec3 up = (Vec3::UnitZ() - Vec3::UnitZ().dot(bond) * bond).normalized();
      const double cos_beta = -std::cos(g.tetrahedral_angle);
      const Vec3 oh = cos_beta * bond + std::sqrt(1.0 - cos_beta * cos_beta) * up;
      sites.push_back(proton("HO", oxygen + g.oh_bond * oh, relax, c, false));
      break;
    }
  }
  return sites;
}

}  // namespace nvnmr

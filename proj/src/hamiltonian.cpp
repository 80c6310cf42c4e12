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

#include "nvnmr/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace nvnmr {
namespace {

constexpr double min_nv_distance = 1e-10;
constexpr double min_pair_distance = 1e-11;

double dipolar_prefactor(double gamma_i, double gamma_j, const PhysicalConstants& c, double r) {
  return gamma_i * gamma_j * c.hbar * c.mu0_over_4pi / (r * r * r);
}

}  // namespace

double coupling_k(const Vec3& position, const PhysicalConstants& c) {
  return coupling_k(position, c, c.gamma_proton);
}

double coupling_k(const Vec3& position, const PhysicalConstants& c, double gamma_target) {
  const double r = position.norm();
  if (!(r > min_nv_distance)) throw std::domain_error("coupling_k: target closer than 0.1 nm to the NV");
  const double cos2 = position.z() * position.z() / (r * r);
  return dipolar_prefactor(c.gamma_nv, gamma_target, c, r) * (1.0 - 3.0 * cos2);
}

double r_max_of(const Vec3& position, const PhysicalConstants& c) { return r_max_of(position, c, c.gamma_proton); }

double r_max_of(const Vec3& position, const PhysicalConstants& c, double gamma_target) {
  const double k = coupling_k(position, c, gamma_target);
  const double r = position.norm();
  // |k| vanishing relative to the on-shell value means the shell is unbounded.
  if (std::abs(k) <= 1e-12 * dipolar_prefactor(c.gamma_nv, gamma_target, c, r)) {
    throw std::domain_error("r_max_of: coupling vanishes at the magic angle");
  }
  return std::cbrt(2.0 * c.gamma_nv * gamma_target * c.hbar * c.mu0_over_4pi / std::abs(k));
}

Eigen::Matrix3d dipolar_tensor(const Vec3& r, double gamma_i, double gamma_j, const PhysicalConstants& c) {
  const double dist = r.norm();
  if (!(dist > min_pair_distance)) throw std::domain_error("dipolar_tensor: degenerate separation");
  const Vec3 u = r / dist;
  Eigen::Matrix3d angular = Eigen::Matrix3d::Identity() - 3.0 * u * u.transpose();
  angular = 0.5 * (angular + angular.transpose()).eval();  // exact symmetry despite FMA contraction
  return dipolar_prefactor(gamma_i, gamma_j, c, dist) * angular;
}

bool HamiltonianParts::is_static() const { return drive_cos.isZero(0.0) && drive_sin.isZero(0.0); }

CMatrix HamiltonianParts::at(double t) const {
  if (is_static()) return static_part;
  const double arg = omega * t + phase;
  return static_part + std::cos(arg) * drive_cos + std::sin(arg) * drive_sin;
}

HamiltonianParts hamiltonian_parts(const ValidatedSystem& system, const HamiltonianModel& model,
                                   const std::optional<DriveSpec>& drive) {
  if (model.frame == Frame::rotating_secular && !drive) {
    throw std::invalid_argument("hamiltonian: rotating_secular frame needs a drive (frame frequency)");
  }
  const auto& spec = system.spec();
  const auto& nuclei = system.active_nuclei();
  const auto& c = spec.constants;
  const std::size_t n = nuclei.size();

  HamiltonianParts parts;
  parts.dims.assign(n + 1, 2);
  const int dim = 1 << (n + 1);
  parts.static_part = CMatrix::Zero(dim, dim);
  parts.drive_cos = CMatrix::Zero(dim, dim);
  parts.drive_sin = CMatrix::Zero(dim, dim);
  if (drive) {
    parts.omega = drive->omega;
    parts.phase = drive->phase;
  }

  const SpinOperators half = spin_operators(0.5);
  const CMatrix nv_z = embed(half.z, 0, parts.dims);
  std::vector<SpinOperators> ops;
  ops.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ops.push_back({embed(half.x, i + 1, parts.dims), embed(half.y, i + 1, parts.dims),
                   embed(half.z, i + 1, parts.dims)});
  }
  const bool rotating = model.frame == Frame::rotating_secular;

  CMatrix& h = parts.static_part;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& site = nuclei[i];
    const auto& op = ops[i];
    const double larmor = larmor_frequency(site, spec.b0);
    if (rotating) {
      h += (larmor - drive->omega) * op.z;
      if (drive->b_nmr != 0.0) {
        const double rabi = site.gamma * drive->b_nmr;
        h += rabi * (std::cos(drive->phase) * op.x + std::sin(drive->phase) * op.y);
      }
    } else {
      h += larmor * op.z;
      if (drive && drive->b_nmr != 0.0) {
        const double rabi = site.gamma * drive->b_nmr;
        parts.drive_cos += rabi * op.x;
        parts.drive_sin += rabi * op.y;
      }
    }

    // NV-nucleus: only the Z_nv row survives the NV secular approximation.
    // Transverse A_zx, A_zy terms rotate at the frame frequency and are
    // dropped in the nuclear rotating frame.
    if (model.nv_coupling == NvCoupling::zz_only || rotating) {
      h += coupling_k(site.position, c, site.gamma) * nv_z * op.z;
    } else {
      const Eigen::Matrix3d d = dipolar_tensor(site.position, c.gamma_nv, site.gamma, c);
      h += nv_z * (d(2, 0) * op.x + d(2, 1) * op.y + d(2, 2) * op.z);
    }
  }

  if (model.include_nuclear_dipolar) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Eigen::Matrix3d d =
            dipolar_tensor(nuclei[i].position - nuclei[j].position, nuclei[i].gamma, nuclei[j].gamma, c);
        const auto& a = ops[i];
        const auto& b = ops[j];
        if (rotating) {
          // Secular part: commutes with the total nuclear Zeeman term.
          if (nuclei[i].gamma == nuclei[j].gamma) {
            h += d(2, 2) * (a.z * b.z - 0.5 * (a.x * b.x + a.y * b.y));
          } else {
            h += d(2, 2) * a.z * b.z;
          }
        } else {
          const CMatrix* av[3] = {&a.x, &a.y, &a.z};
          const CMatrix* bv[3] = {&b.x, &b.y, &b.z};
          for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) h += d(p, q) * (*av[p]) * (*bv[q]);
          }
        }
      }
    }
  }
  return parts;
}

CMatrix build_hamiltonian(const ValidatedSystem& system, const HamiltonianModel& model,
                          const std::optional<DriveSpec>& drive, double t) {
  return hamiltonian_parts(system, model, drive).at(t);
}

}  // namespace nvnmr

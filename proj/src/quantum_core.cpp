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

#include "nvnmr/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "nvnmr/errors.hpp"

namespace nvnmr {

validation_error::validation_error(std::vector<Violation> violations)
    : config_error([&] {
        std::string msg = "validation failed:";
        for (const auto& v : violations) msg += "\n  " + v.field + ": " + v.message;
        return msg;
      }()),
      violations_(std::move(violations)) {}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix kron_all(std::span<const CMatrix> factors) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

double hermiticity_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix SpinOperators::raising() const { return x + complex(0, 1) * y; }
CMatrix SpinOperators::lowering() const { return x - complex(0, 1) * y; }

SpinOperators spin_operators(double s) {
  int dim = 0;
  if (s == 0.5) {
    dim = 2;
  } else if (s == 1.0) {
    dim = 3;
  } else {
    throw std::invalid_argument("spin_operators: unsupported spin quantum number " + std::to_string(s));
  }
  // <m+1|S+|m> = sqrt(s(s+1) - m(m+1)); row index k holds m = s - k.
  CMatrix plus = CMatrix::Zero(dim, dim);
  CMatrix z = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = s - k;
    z(k, k) = m;
    if (k > 0) plus(k - 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  const CMatrix minus = plus.adjoint();
  return {(plus + minus) / 2.0, (plus - minus) / complex(0, 2), z};
}

CMatrix embed(const CMatrix& op, std::size_t index, std::span<const int> dims) {
  if (index >= dims.size() || op.rows() != dims[index] || op.cols() != dims[index]) {
    throw std::invalid_argument("embed: operator does not match subsystem");
  }
  int before = 1;
  int after = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k < index) before *= dims[k];
    if (k > index) after *= dims[k];
  }
  return kron(kron(CMatrix::Identity(before, before), op), CMatrix::Identity(after, after));
}

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(CMatrix matrix, std::vector<int> subsystem_dims)
    : matrix_(std::move(matrix)), dims_(std::move(subsystem_dims)) {
  if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("DensityMatrix: matrix not square");
  const long product = std::accumulate(dims_.begin(), dims_.end(), 1L, std::multiplies<>());
  if (dims_.empty() || product != matrix_.rows()) {
    throw std::invalid_argument("DensityMatrix: subsystem dimensions do not multiply to matrix size");
  }
  if (!matrix_.allFinite()) throw std::invalid_argument("DensityMatrix: non-finite entries");
}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<int> subsystem_dims) {
  const int d = std::accumulate(subsystem_dims.begin(), subsystem_dims.end(), 1, std::multiplies<>());
  return {CMatrix::Identity(d, d) / static_cast<double>(d), std::move(subsystem_dims)};
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

CVector DensityMatrix::vectorized() const {
  return Eigen::Map<const CVector>(matrix_.data(), matrix_.size());
}

DensityMatrix DensityMatrix::from_vectorized(const CVector& v, std::vector<int> subsystem_dims) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size()) throw std::invalid_argument("from_vectorized: length is not a square");
  return {Eigen::Map<const CMatrix>(v.data(), d, d), std::move(subsystem_dims)};
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& a) {
  const CMatrix h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Physicality physicality(const DensityMatrix& rho) {
  const CMatrix& m = rho.matrix();
  const double scale = std::max(m.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  return {
      hermiticity_defect(m) / scale,
      std::abs(m.trace() - 1.0),
      hermitian_eigenvalues(m).minCoeff(),
      rho.purity(),
  };
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  return 0.5 * hermitian_eigenvalues(a - b).cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const auto& dims = rho.subsystem_dims();
  const std::size_t n = dims.size();
  std::vector<std::size_t> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (kept.empty() || std::adjacent_find(kept.begin(), kept.end()) != kept.end() || kept.back() >= n) {
    throw std::invalid_argument("partial_trace: invalid subsystem index set");
  }
  std::vector<bool> is_kept(n, false);
  for (auto k : kept) is_kept[k] = true;

  std::vector<int> out_dims;
  for (auto k : kept) out_dims.push_back(dims[k]);
  const int out_dim = std::accumulate(out_dims.begin(), out_dims.end(), 1, std::multiplies<>());

  // Split a full index into (kept index, traced index), both mixed-radix.
  const int d = rho.dim();
  std::vector<int> kept_index(d), traced_index(d);
  for (int full = 0; full < d; ++full) {
    int rem = full;
    int kept_val = 0, kept_stride = 1;
    int traced_val = 0, traced_stride = 1;
    for (std::size_t k = n; k-- > 0;) {
      const int digit = rem % dims[k];
      rem /= dims[k];
      if (is_kept[k]) {
        kept_val += digit * kept_stride;
        kept_stride *= dims[k];
      } else {
        traced_val += digit * traced_stride;
        traced_stride *= dims[k];
      }
    }
    kept_index[full] = kept_val;
    traced_index[full] = traced_val;
  }

  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  const CMatrix& m = rho.matrix();
  for (int b = 0; b < d; ++b) {
    for (int a = 0; a < d; ++a) {
      if (traced_index[a] == traced_index[b]) out(kept_index[a], kept_index[b]) += m(a, b);
    }
  }
  return {std::move(out), std::move(out_dims)};
}

// ---------------------------------------------------------------------------

double Superoperator::trace_defect() const {
  CVector id = CVector::Zero(static_cast<Eigen::Index>(dim) * dim);
  for (int i = 0; i < dim; ++i) id(i * dim + i) = 1.0;
  return (id.adjoint() * matrix).cwiseAbs().maxCoeff();
}

Superoperator sandwich(const CMatrix& left, const CMatrix& right) {
  return {static_cast<int>(left.rows()), kron(right.transpose(), left)};
}

Superoperator hamiltonian_superoperator(const CMatrix& h) {
  const auto d = h.rows();
  const CMatrix id = CMatrix::Identity(d, d);
  return {static_cast<int>(d), complex(0, -1) * (kron(id, h) - kron(h.transpose(), id))};
}

Superoperator liouvillian(const CMatrix& h, std::span<const LindbladChannel> channels) {
  if (h.rows() != h.cols()) throw std::invalid_argument("liouvillian: Hamiltonian not square");
  const auto d = h.rows();
  if (d > max_dimension) {
    throw std::invalid_argument("liouvillian: dimension " + std::to_string(d) + " exceeds cap " +
                                std::to_string(max_dimension));
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (hermiticity_defect(h) > 1e-10 * scale) throw std::invalid_argument("liouvillian: Hamiltonian not Hermitian");

  Superoperator out = hamiltonian_superoperator(h);
  const CMatrix id = CMatrix::Identity(d, d);
  for (const auto& ch : channels) {
    if (ch.jump_operator.rows() != d || ch.jump_operator.cols() != d) {
      throw std::invalid_argument("liouvillian: jump operator dimension mismatch");
    }
    if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) throw std::invalid_argument("liouvillian: negative or non-finite rate");
    if (ch.rate == 0.0) continue;
    const CMatrix& j = ch.jump_operator;
    const CMatrix jdj = j.adjoint() * j;
    out.matrix += ch.rate * (kron(j.conjugate(), j) - 0.5 * kron(id, jdj) - 0.5 * kron(jdj.transpose(), id));
  }
  return out;
}

}  // namespace nvnmr

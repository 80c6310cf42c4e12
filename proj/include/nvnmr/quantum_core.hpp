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

// Dense complex linear algebra for small open spin systems.
//
// Density matrices are vectorized column-wise (Eigen's native storage
// order), so vec(A X B) = (B^T kron A) vec(X). Every superoperator in the
// library follows that convention.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nvnmr {

using complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Largest Hilbert-space dimension accepted by any builder.
inline constexpr int max_dimension = 64;

/// Kronecker product; the first factor is the most significant subsystem.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Kronecker product of a list of factors, left to right.
CMatrix kron_all(std::span<const CMatrix> factors);

CMatrix commutator(const CMatrix& a, const CMatrix& b);

/// Largest |a_ij - conj(a_ji)|.
double hermiticity_defect(const CMatrix& a);

struct SpinOperators {
  CMatrix x;
  CMatrix y;
  CMatrix z;

  CMatrix raising() const;
  CMatrix lowering() const;
};

/// Angular momentum matrices in units of hbar, basis ordered m = s, s-1, ..., -s.
/// Only s = 1/2 and s = 1 are supported.
SpinOperators spin_operators(double spin_quantum_number);

/// `op` acting on subsystem `index` of a register with local dimensions `dims`.
CMatrix embed(const CMatrix& op, std::size_t index, std::span<const int> dims);

class DensityMatrix {
 public:
  /// Checks shape, finiteness and that `dims` multiply to the matrix size.
  /// Physical properties are reported by `physicality`, not enforced here.
  DensityMatrix(CMatrix matrix, std::vector<int> subsystem_dims);

  static DensityMatrix maximally_mixed(std::vector<int> subsystem_dims);

  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  const CMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<int>& subsystem_dims() const noexcept { return dims_; }

  complex trace() const { return matrix_.trace(); }
  double purity() const;

  CVector vectorized() const;
  static DensityMatrix from_vectorized(const CVector& v, std::vector<int> subsystem_dims);

 private:
  CMatrix matrix_;
  std::vector<int> dims_;
};

struct Physicality {
  double hermiticity;      // relative to the largest entry
  double trace_deviation;  // |tr(rho) - 1|
  double min_eigenvalue;   // of the Hermitian part
  double purity;
};

Physicality physicality(const DensityMatrix& rho);

/// Eigenvalues of (a + a^dagger)/2, ascending.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& a);

/// 0.5 * ||a - b||_1 for Hermitian arguments.
double trace_distance(const CMatrix& a, const CMatrix& b);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state on the subsystems listed in `keep` (original order preserved).
/// Throws std::invalid_argument for an empty, repeated or out-of-range index set.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

struct LindbladChannel {
  CMatrix jump_operator;
  double rate;  // 1/s
};

struct Superoperator {
  int dim = 0;     // system dimension d
  CMatrix matrix;  // d^2 x d^2, acts on column-vectorized rho

  /// max |vec(I)^dagger L|; zero for a trace-preserving generator.
  double trace_defect() const;
};

/// vec(rho) -> vec(left * rho * right)
Superoperator sandwich(const CMatrix& left, const CMatrix& right);

/// Superoperator of -i[h, rho].
Superoperator hamiltonian_superoperator(const CMatrix& h);

/// drho/dt = -i[H, rho] + sum_k rate_k (J rho J^dagger - {J^dagger J, rho}/2), rad/s.
/// Throws std::invalid_argument for a non-Hermitian `h`, negative rates,
/// mismatched dimensions or d > max_dimension.
Superoperator liouvillian(const CMatrix& h, std::span<const LindbladChannel> channels);

}  // namespace nvnmr

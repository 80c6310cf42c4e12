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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "nvnmr/errors.hpp"
#include "nvnmr/evolve.hpp"
#include "nvnmr/matexp.hpp"
#include "nvnmr/quantum_core.hpp"
#include "test_util.hpp"

using namespace nvnmr;
using namespace nvnmr::testing;
using std::numbers::pi;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// exp(-i H t) through the Hermitian eigendecomposition.
CMatrix unitary_oracle(const CMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) phases(k) = std::exp(complex(0, -es.eigenvalues()(k) * t));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

DensityMatrix qubit(const CMatrix& m) { return {m, {2}}; }

}  // namespace

TEST_CASE("kron follows the standard ordering") {
  CHECK(max_abs(kron(CMatrix::Identity(2, 2), CMatrix::Identity(2, 2)) - CMatrix::Identity(4, 4)) == 0.0);

  const CMatrix zz = kron(pauli_z(), pauli_z());
  CMatrix expected = CMatrix::Zero(4, 4);
  expected.diagonal() << 1, -1, -1, 1;
  CHECK(max_abs(zz - expected) == 0.0);

  const CMatrix a = CMatrix::Ones(2, 3);
  const CMatrix b = CMatrix::Ones(4, 5);
  const CMatrix ab = kron(a, b);
  CHECK(ab.rows() == 8);
  CHECK(ab.cols() == 15);

  // First factor is the most significant index.
  CMatrix e0 = CMatrix::Zero(2, 2);
  e0(0, 1) = 1.0;
  const CMatrix big = kron(e0, CMatrix::Identity(2, 2));
  CHECK(big(0, 2) == complex(1.0));
  CHECK(big(1, 3) == complex(1.0));
}

TEST_CASE("matexp basic identities") {
  CHECK(max_abs(matexp(CMatrix::Zero(3, 3)) - CMatrix::Identity(3, 3)) == 0.0);

  const CMatrix rot = matexp(complex(0, -pi / 2) * pauli_x());
  CHECK(max_abs(rot - complex(0, -1) * pauli_x()) < 1e-14);

  CHECK_THROWS_AS(matexp(CMatrix::Zero(2, 3)), std::invalid_argument);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(matexp(bad), std::invalid_argument);
}

TEST_CASE("matexp of anti-Hermitian matrices is unitary and matches the eigendecomposition") {
  std::mt19937_64 rng(7);
  for (double scale : {1e-3, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
    for (int n : {2, 4, 8, 16}) {
      CMatrix h = random_hermitian(rng, n);
      h *= scale / h.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm = scale
      const CMatrix u = matexp(complex(0, -1) * h);
      CAPTURE(scale);
      CAPTURE(n);
      CHECK(max_abs(u * u.adjoint() - CMatrix::Identity(n, n)) < 1e-10);
      const CMatrix ref = unitary_oracle(h, 1.0);
      CHECK(max_abs(u - ref) / max_abs(ref) < 1e-10);
    }
  }
}

TEST_CASE("matexp agrees with Eigen's MatrixFunctions on non-normal matrices") {
  std::mt19937_64 rng(11);
  for (double scale : {1e-2, 0.5, 2.0, 8.0}) {
    for (int n : {3, 6, 12}) {
      CMatrix a = random_matrix(rng, n);
      a *= scale / a.cwiseAbs().colwise().sum().maxCoeff();
      const CMatrix mine = matexp(a);
      const CMatrix ref = a.exp();
      CAPTURE(scale);
      CHECK(max_abs(mine - ref) / max_abs(ref) < 1e-10);
    }
  }
}

TEST_CASE("spin operators") {
  const auto half = spin_operators(0.5);
  CHECK(half.z(0, 0) == complex(0.5));
  CHECK(half.z(1, 1) == complex(-0.5));
  const auto one = spin_operators(1.0);
  CHECK(one.z(0, 0) == complex(1.0));
  CHECK(one.z(1, 1) == complex(0.0));
  CHECK(one.z(2, 2) == complex(-1.0));
  for (const auto& s : {half, one}) {
    CHECK(max_abs(commutator(s.x, s.y) - complex(0, 1) * s.z) < 1e-12);
    CHECK(max_abs(commutator(s.y, s.z) - complex(0, 1) * s.x) < 1e-12);
    CHECK(hermiticity_defect(s.x) == 0.0);
  }
  // S^2 = s(s+1)
  const CMatrix s2 = one.x * one.x + one.y * one.y + one.z * one.z;
  CHECK(max_abs(s2 - 2.0 * CMatrix::Identity(3, 3)) < 1e-12);
  CHECK_THROWS_AS(spin_operators(1.5), std::invalid_argument);
  CHECK_THROWS_AS(spin_operators(0.0), std::invalid_argument);
}

TEST_CASE("density matrix construction checks shape only") {
  CHECK_THROWS_AS(DensityMatrix(CMatrix::Identity(4, 4) / 4.0, {2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix(CMatrix::Identity(2, 3), {2}), std::invalid_argument);
  const auto mixed = DensityMatrix::maximally_mixed({2, 2});
  CHECK(mixed.dim() == 4);
  CHECK(mixed.purity() == doctest::Approx(0.25));
  const auto p = physicality(mixed);
  CHECK(p.trace_deviation < 1e-15);
  CHECK(p.min_eigenvalue == doctest::Approx(0.25));
}

TEST_CASE("partial trace") {
  std::mt19937_64 rng(3);
  const CMatrix ra = random_state(rng, 2);
  const CMatrix rb = random_state(rng, 3);
  const DensityMatrix ab(kron(ra, rb), {2, 3});

  const std::size_t keep_a[] = {0};
  CHECK(max_abs(partial_trace(ab, keep_a).matrix() - ra) < 1e-14);
  const std::size_t keep_b[] = {1};
  CHECK(max_abs(partial_trace(ab, keep_b).matrix() - rb) < 1e-14);

  CVector bell = CVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const DensityMatrix bell_rho(bell * bell.adjoint(), {2, 2});
  CHECK(max_abs(partial_trace(bell_rho, keep_a).matrix() - CMatrix::Identity(2, 2) / 2.0) < 1e-15);

  const std::size_t all[] = {0, 1};
  CHECK(max_abs(partial_trace(ab, all).matrix() - ab.matrix()) == 0.0);

  const std::size_t none[] = {5};
  CHECK_THROWS_AS(partial_trace(ab, none), std::invalid_argument);
  const std::size_t dup[] = {0, 0};
  CHECK_THROWS_AS(partial_trace(ab, dup), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(ab, std::span<const std::size_t>{}), std::invalid_argument);
}

TEST_CASE("partial trace composes") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho(random_state(rng, 12), {2, 3, 2});
    const std::size_t keep0[] = {0};
    const std::size_t keep01[] = {0, 1};
    const DensityMatrix joint = partial_trace(rho, keep0);
    const DensityMatrix step = partial_trace(partial_trace(rho, keep01), keep0);
    CHECK(max_abs(joint.matrix() - step.matrix()) < 1e-12);

    const std::size_t keep02[] = {0, 2};
    const std::size_t keep1_of_02[] = {1};
    const std::size_t keep2[] = {2};
    CHECK(max_abs(partial_trace(partial_trace(rho, keep02), keep1_of_02).matrix() -
                  partial_trace(rho, keep2).matrix()) < 1e-12);
  }
}

TEST_CASE("liouvillian structure") {
  const Superoperator zero = liouvillian(CMatrix::Zero(3, 3), {});
  CHECK(zero.matrix.rows() == 9);
  CHECK(max_abs(zero.matrix) == 0.0);

  std::mt19937_64 rng(13);
  const CMatrix h = random_hermitian(rng, 4, 1e4);
  std::vector<LindbladChannel> channels{{random_matrix(rng, 4), 30.0}, {random_matrix(rng, 4), 0.5}};
  const Superoperator l = liouvillian(h, channels);
  CHECK(l.trace_defect() < 1e-10 * max_abs(l.matrix));

  // Matches the direct right-hand side on a random state.
  const CMatrix rho = random_state(rng, 4);
  CMatrix rhs = complex(0, -1) * commutator(h, rho);
  for (const auto& ch : channels) {
    const CMatrix& j = ch.jump_operator;
    rhs += ch.rate * (j * rho * j.adjoint() - 0.5 * (j.adjoint() * j * rho + rho * j.adjoint() * j));
  }
  const CVector vrho = Eigen::Map<const CVector>(rho.data(), rho.size());
  const CVector got = l.matrix * vrho;
  CHECK(max_abs(Eigen::Map<const CMatrix>(got.data(), 4, 4) - rhs) < 1e-9 * max_abs(rhs));

  CHECK_THROWS_AS(liouvillian(random_matrix(rng, 2), {}), std::invalid_argument);
  std::vector<LindbladChannel> wrong{{CMatrix::Identity(3, 3), 1.0}};
  CHECK_THROWS_AS(liouvillian(CMatrix::Zero(2, 2), wrong), std::invalid_argument);
  std::vector<LindbladChannel> negative{{CMatrix::Identity(2, 2), -1.0}};
  CHECK_THROWS_AS(liouvillian(CMatrix::Zero(2, 2), negative), std::invalid_argument);
  CHECK_THROWS_AS(liouvillian(CMatrix::Zero(65, 65), {}), std::invalid_argument);
}

TEST_CASE("single-qubit closed forms") {
  const auto s = spin_operators(0.5);
  CMatrix up = CMatrix::Zero(2, 2);
  up(0, 0) = 1.0;

  SUBCASE("Rabi oscillation") {
    const double omega = 2 * pi * 1e3;
    const Generator gen(liouvillian(omega * s.x, {}));
    for (double t : {0.0, 1e-4, 3.3e-4, 1e-3, 2.7e-3}) {
      const DensityMatrix rho = evolve(qubit(up), gen, t, {});
      const double expected = std::pow(std::sin(omega * t / 2), 2);
      CHECK(rho.matrix()(1, 1).real() == doctest::Approx(expected).epsilon(1e-11));
    }
  }

  SUBCASE("pure dephasing at rate 2/T2 on S_z") {
    const double t2 = 1e-3;
    std::vector<LindbladChannel> ch{{s.z, 2.0 / t2}};
    const Generator gen(liouvillian(CMatrix::Zero(2, 2), ch));
    const DensityMatrix plus(CMatrix::Constant(2, 2, 0.5), {2});
    for (double t : {1e-4, 1e-3, 3e-3}) {
      const DensityMatrix rho = evolve(plus, gen, t, {});
      CHECK(rho.matrix()(0, 1).real() == doctest::Approx(0.5 * std::exp(-t / t2)).epsilon(1e-12));
    }
  }

  SUBCASE("T1 relaxation with S+ and S- at 1/(2 T1)") {
    const double t1 = 5e-3;
    std::vector<LindbladChannel> ch{{s.raising(), 1 / (2 * t1)}, {s.lowering(), 1 / (2 * t1)}};
    const Generator gen(liouvillian(CMatrix::Zero(2, 2), ch));
    for (double t : {1e-3, 5e-3, 2e-2}) {
      for (Backend backend : {Backend::exact_piecewise, Backend::stepped}) {
        EvolutionOptions opts;
        opts.backend = backend;
        opts.max_step = 1e-5;
        const DensityMatrix rho = evolve(qubit(up), gen, t, opts);
        const double sz = (rho.matrix() * s.z).trace().real();
        CHECK(sz == doctest::Approx(0.5 * std::exp(-t / t1)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("evolve contracts") {
  std::mt19937_64 rng(17);
  const CMatrix h = random_hermitian(rng, 4, 2 * pi * 1e3);
  std::vector<LindbladChannel> ch{{random_matrix(rng, 4), 200.0}, {random_matrix(rng, 4), 50.0}};
  const Generator gen(liouvillian(h, ch));
  const DensityMatrix rho0(random_state(rng, 4), {2, 2});

  CHECK(max_abs(evolve(rho0, gen, 0.0, {}).matrix() - rho0.matrix()) == 0.0);
  CHECK_THROWS_AS(evolve(rho0, gen, -1.0, {}), std::invalid_argument);

  EvolutionOptions stepped;
  stepped.backend = Backend::stepped;
  const DensityMatrix exact = evolve(rho0, gen, 2e-3, {});
  const DensityMatrix rk = evolve(rho0, gen, 2e-3, stepped);
  CHECK(trace_distance(exact, rk) <= 1e-6);

  const auto p = physicality(exact);
  CHECK(p.trace_deviation < 1e-9);
  CHECK(p.hermiticity < 1e-10);
  CHECK(p.min_eigenvalue > -1e-9);

  EvolutionOptions tiny = stepped;
  tiny.max_step = 1e-15;
  CHECK_THROWS_AS(evolve(rho0, gen, 1.0, tiny), computation_error);
  EvolutionOptions bad_tol;
  bad_tol.tolerance = 0.1;
  CHECK_THROWS_AS(evolve(rho0, gen, 1e-3, bad_tol), std::invalid_argument);

  // Time-dependent generators need the stepped backend.
  const Generator driven(liouvillian(h, ch), {{hamiltonian_superoperator(h), 1e4, 0.0, Waveform::cosine}});
  CHECK_THROWS_AS(evolve(rho0, driven, 1e-3, {}), std::invalid_argument);
  CHECK_NOTHROW(evolve(rho0, driven, 1e-4, stepped));
}

TEST_CASE("unitary limit conserves purity; channels keep rho physical") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = trial % 2 == 0 ? 4 : 8;
    const std::vector<int> dims = d == 4 ? std::vector<int>{2, 2} : std::vector<int>{2, 2, 2};
    const CMatrix h = random_hermitian(rng, d, 1e4);
    const DensityMatrix rho0(random_state(rng, d), dims);

    const Generator closed(liouvillian(h, {}));
    const DensityMatrix closed_out = evolve(rho0, closed, 7e-4, {});
    CHECK(std::abs(closed_out.purity() - rho0.purity()) < 1e-9);

    std::vector<LindbladChannel> ch{{random_matrix(rng, d), 1e3}};
    const Generator open(liouvillian(h, ch));
    DensityMatrix rho = rho0;
    for (int k = 0; k < 5; ++k) {
      rho = evolve(rho, open, 2e-4, {});
      const auto p = physicality(rho);
      CHECK(p.trace_deviation < 1e-9);
      CHECK(p.hermiticity < 1e-10);
      CHECK(p.min_eigenvalue > -1e-9);
    }
  }
}

TEST_CASE("propagator cache memoizes by duration") {
  std::mt19937_64 rng(29);
  const Generator gen(liouvillian(random_hermitian(rng, 2, 1e3), {}));
  PropagatorCache cache;
  const DensityMatrix rho0(random_state(rng, 2), {2});
  const DensityMatrix a = evolve(rho0, gen, 1e-3, {}, 0.0, &cache);
  const DensityMatrix b = evolve(a, gen, 1e-3, {}, 0.0, &cache);
  CHECK(cache.size() == 1);
  const DensityMatrix direct = evolve(rho0, gen, 2e-3, {});
  CHECK(trace_distance(b, direct) < 1e-12);
}

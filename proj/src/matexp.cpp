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

#include "nvnmr/matexp.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace nvnmr {
namespace {

double one_norm(const CMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Numerator U (odd part) and denominator V (even part) of r_m(A) = (V - U)^-1 (V + U).
template <std::size_t N>
std::pair<CMatrix, CMatrix> pade_low(const CMatrix& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  CMatrix power = id;
  CMatrix odd = CMatrix::Zero(n, n);
  CMatrix even = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k + 1 < N; k += 2) {
    even += b[k] * power;
    odd += b[k + 1] * power;
    power = power * a2;
  }
  return {a * odd, even};
}

std::pair<CMatrix, CMatrix> pade13(const CMatrix& a) {
  constexpr std::array<double, 14> b = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                        1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                        670442572800.0,      33522128640.0,       1323241920.0,
                                        40840800.0,          960960.0,            16380.0,
                                        182.0,               1.0};
  const auto n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  const CMatrix u = a * (u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const CMatrix v_inner = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  const CMatrix v = v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return {u, v};
}

}  // namespace

CMatrix matexp(const CMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matexp: matrix not square");
  if (!a.allFinite()) throw std::invalid_argument("matexp: non-finite entries");
  const auto n = a.rows();
  if (n == 0) return a;

  constexpr std::array<double, 4> theta = {1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1,
                                           2.097847961257068e0};
  constexpr double theta13 = 5.371920351148152e0;

  const double norm = one_norm(a);
  std::pair<CMatrix, CMatrix> uv;
  int squarings = 0;
  if (norm <= theta[0]) {
    uv = pade_low(a, std::array<double, 4>{120.0, 60.0, 12.0, 1.0});
  } else if (norm <= theta[1]) {
    uv = pade_low(a, std::array<double, 6>{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0});
  } else if (norm <= theta[2]) {
    uv = pade_low(a, std::array<double, 8>{17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0});
  } else if (norm <= theta[3]) {
    uv = pade_low(a, std::array<double, 10>{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                                            2162160.0, 110880.0, 3960.0, 90.0, 1.0});
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    uv = pade13(a / std::ldexp(1.0, squarings));
  }

  const auto& [u, v] = uv;
  CMatrix result = Eigen::PartialPivLU<CMatrix>(v - u).solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

}  // namespace nvnmr

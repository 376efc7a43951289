// Copyright 2026 The ERD Authors
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

#include <cmath>
#include <random>

#include "erd/dense.hpp"

namespace erd {

/// Matrix with independent standard complex Gaussian entries.
inline Matrix ginibre(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) m(r, c) = cplx(g(rng), g(rng));
  return m;
}

/// Random Hermitian matrix scaled to unit spectral norm.
inline Matrix random_hermitian(Index n, std::mt19937_64& rng) {
  const Matrix a = ginibre(n, rng);
  const Matrix h = 0.5 * (a + a.adjoint());
  return h / spectral_norm(h);
}

/// Haar-random unitary (QR of a Ginibre matrix with phase correction).
inline Matrix random_unitary(Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(ginibre(n, rng));
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Index k = 0; k < n; ++k) {
    const cplx d = r(k, k);
    q.col(k) *= d / std::abs(d);
  }
  return q;
}

/// Haar-random 2x2 unitary with unit determinant.
inline Matrix random_su2(std::mt19937_64& rng) {
  Matrix u = random_unitary(2, rng);
  return u / std::sqrt(u.determinant());
}

/// Mutually commuting Hermitian operators: random spectra in one random basis.
inline std::vector<Matrix> random_commuting_hermitian(Index n, std::size_t count,
                                                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Matrix v = random_unitary(n, rng);
  std::vector<Matrix> out;
  for (std::size_t k = 0; k < count; ++k) {
    Vector d(n);
    for (Index j = 0; j < n; ++j) d(j) = u(rng);
    out.push_back(v * d.asDiagonal() * v.adjoint());
  }
  return out;
}

}  // namespace erd

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
#include <complex>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "erd/errors.hpp"
#include "erd/pauli.hpp"

namespace erd {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Dense operators are plain complex matrices; the tensor layout travels
/// separately as a Layout.
using DenseOperator = Matrix;

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kBranchGuard = 1e-6;

/**
 * Tensor layout of a joint Hilbert space: `qubits` two-level sites (site 0
 * is the slowest-varying factor) followed by bath factors.
 */
struct Layout {
  std::size_t qubits = 0;
  std::vector<Index> bath_dims;

  Index system_dim() const { return Index{1} << qubits; }
  Index bath_dim() const {
    return std::accumulate(bath_dims.begin(), bath_dims.end(), Index{1},
                           std::multiplies<>());
  }
  Index dim() const { return system_dim() * bath_dim(); }
  std::vector<Index> dims() const {
    std::vector<Index> d(qubits, 2);
    d.insert(d.end(), bath_dims.begin(), bath_dims.end());
    return d;
  }
};

/// Named dense bath operators, all acting on the full bath factor.
using BathBindings = std::map<std::string, Matrix>;

inline Matrix pauli_matrix(Pauli p) {
  using namespace std::complex_literals;
  Matrix m(2, 2);
  switch (p) {
    case Pauli::I:
      m << 1, 0, 0, 1;
      break;
    case Pauli::X:
      m << 0, 1, 1, 0;
      break;
    case Pauli::Y:
      m << 0, -1i, 1i, 0;
      break;
    case Pauli::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Matrix of a Pauli string, built column by column: P|x> = phase |x ^ flip>.
inline Matrix pauli_string_matrix(const std::string& factors) {
  const std::size_t n = factors.size();
  const Index dim = Index{1} << n;
  Matrix m = Matrix::Zero(dim, dim);
  for (Index x = 0; x < dim; ++x) {
    Index y = x;
    cplx phase = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const Index bit = Index{1} << (n - 1 - k);
      const bool one = (x & bit) != 0;
      switch (factors[k]) {
        case 'I':
          break;
        case 'X':
          y ^= bit;
          break;
        case 'Y':
          y ^= bit;
          phase *= one ? cplx(0, -1) : cplx(0, 1);
          break;
        case 'Z':
          if (one) phase = -phase;
          break;
        default:
          throw DomainError("bad Pauli label in string");
      }
    }
    m(y, x) = phase;
  }
  return m;
}

inline Matrix bath_word_matrix(const BathWord& word, Index bath_dim,
                               const BathBindings& bindings) {
  Matrix m = Matrix::Identity(bath_dim, bath_dim);
  for (const auto& name : word) {
    auto it = bindings.find(name);
    if (it == bindings.end()) throw UnboundBathSlot(name);
    if (it->second.rows() != bath_dim || it->second.cols() != bath_dim)
      throw DimensionError("bath binding '" + name + "' has dimension " +
                           std::to_string(it->second.rows()) + ", expected " +
                           std::to_string(bath_dim));
    m = m * it->second;
  }
  return m;
}

inline Matrix to_dense(const OperatorSum& op, const Layout& layout,
                       const BathBindings& bindings = {}) {
  if (op.width() != layout.qubits)
    throw DimensionError("to_dense: operator width " +
                         std::to_string(op.width()) + " vs layout qubits " +
                         std::to_string(layout.qubits));
  const Index db = layout.bath_dim();
  Matrix out = Matrix::Zero(layout.dim(), layout.dim());
  for (const auto& t : op.terms()) {
    const Matrix sys = pauli_string_matrix(t.factors);
    if (db == 1 && t.bath.empty()) {
      out += t.coefficient * sys;
    } else {
      out += t.coefficient * kron(sys, bath_word_matrix(t.bath, db, bindings));
    }
  }
  return out;
}

/// System-only conversion; bath words are rejected as unbound.
inline Matrix to_dense(const OperatorSum& op) {
  return to_dense(op, Layout{op.width(), {}});
}

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline Matrix commutator(const Matrix& a, const Matrix& b) {
  return a * b - b * a;
}

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

inline bool is_unitary(const Matrix& m, double tol = kUnitaryTol) {
  return m.rows() == m.cols() &&
         max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())) <= tol;
}

/**
 * Spectral form of a Hermitian operator, reusable for exp(-i h t) at many t.
 */
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const Matrix& h) {
    if (!is_hermitian(h))
      throw DomainError("expm_i: input is not Hermitian (max deviation " +
                        std::to_string(max_abs(h - h.adjoint())) + ")");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    vectors_ = es.eigenvectors();
    values_ = es.eigenvalues();
  }

  Matrix operator()(double t) const {
    Vector phases(values_.size());
    for (Index k = 0; k < values_.size(); ++k)
      phases(k) = std::exp(cplx(0.0, -values_(k) * t));
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
  }

  const Eigen::VectorXd& eigenvalues() const { return values_; }

 private:
  Matrix vectors_;
  Eigen::VectorXd values_;
};

/// exp(-i h t) for Hermitian h.
inline Matrix expm_i(const Matrix& h, double t) {
  return HermitianPropagator(h)(t);
}

/**
 * Effective Hamiltonian of a unitary: H with exp(-i H total_time) = u, taken
 * from the principal logarithm. Eigenphases within kBranchGuard of +-pi are
 * rejected.
 */
inline Matrix generator_of(const Matrix& u, double total_time) {
  if (!is_unitary(u))
    throw DomainError("generator_of: input is not unitary");
  if (!(total_time > 0.0))
    throw DomainError("generator_of: total_time must be positive");
  // A unitary is normal, so its complex Schur form is diagonal.
  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();
  Vector logs(t.rows());
  for (Index k = 0; k < t.rows(); ++k) {
    const double phase = std::arg(t(k, k));
    if (M_PI - std::abs(phase) < kBranchGuard) throw BranchCutError(phase);
    logs(k) = cplx(std::log(std::abs(t(k, k))), phase);
  }
  const Matrix log_u = q * logs.asDiagonal() * q.adjoint();
  Matrix h = cplx(0.0, 1.0 / total_time) * log_u;
  return 0.5 * (h + h.adjoint());
}

/// Tr_S[(S^dagger (x) I_B) H] / Tr(S^dagger S): the bath operator multiplying
/// the system operator `s` in H = sum_k S_k (x) B_k for an orthogonal basis.
inline Matrix bath_component(const Matrix& h, const Matrix& s, Index bath_dim) {
  const Index ds = s.rows();
  if (h.rows() != ds * bath_dim)
    throw DimensionError("bath_component: dimension mismatch");
  const double norm = (s.adjoint() * s).trace().real();
  Matrix out = Matrix::Zero(bath_dim, bath_dim);
  for (Index a = 0; a < ds; ++a)
    for (Index b = 0; b < ds; ++b) {
      const cplx w = std::conj(s(a, b));
      if (w == cplx(0.0)) continue;
      out += w * h.block(a * bath_dim, b * bath_dim, bath_dim, bath_dim);
    }
  return out / norm;
}

}  // namespace erd

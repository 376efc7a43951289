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

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "erd/dense.hpp"
#include "erd/errors.hpp"
#include "erd/pauli.hpp"

namespace erd {

/// Two physical qubits encoding one logical qubit, first < second.
struct IonPair {
  std::size_t first = 0;
  std::size_t second = 1;

  friend bool operator==(const IonPair&, const IonPair&) = default;
};

inline void check_pair(const IonPair& p, std::size_t width) {
  if (p.first >= p.second || p.second >= width)
    throw DomainError("invalid ion pair (" + std::to_string(p.first) + "," +
                      std::to_string(p.second) + ") for width " +
                      std::to_string(width));
}

/**
 * A register of disjoint ion pairs. Logical bit b of pair k maps the pair to
 * |down,up> (b = 0) or |up,down> (b = 1); |up> is the Z = +1 basis state
 * |0>. Logical bit 0 is the most significant bit of the logical index.
 */
class DfsRegister {
 public:
  DfsRegister(std::vector<IonPair> pairs, std::size_t width)
      : pairs_(std::move(pairs)), width_(width) {
    std::vector<bool> used(width, false);
    for (const auto& p : pairs_) {
      check_pair(p, width);
      if (used[p.first] || used[p.second])
        throw DomainError("DfsRegister: pairs overlap");
      used[p.first] = used[p.second] = true;
    }
  }

  /// Pairs (0,1), (2,3), ... covering `n_pairs` logical qubits.
  static DfsRegister consecutive(std::size_t n_pairs) {
    std::vector<IonPair> ps;
    for (std::size_t k = 0; k < n_pairs; ++k) ps.push_back({2 * k, 2 * k + 1});
    return DfsRegister(std::move(ps), 2 * n_pairs);
  }

  const std::vector<IonPair>& pairs() const { return pairs_; }
  std::size_t width() const { return width_; }
  std::size_t logical_qubits() const { return pairs_.size(); }

  /// Computational index of the encoding of logical basis state `logical`.
  Index physical_index(Index logical) const {
    Index idx = 0;
    const std::size_t np = pairs_.size();
    for (std::size_t k = 0; k < np; ++k) {
      const bool bit = (logical >> (np - 1 - k)) & 1;
      // |down> is computational 1.
      const std::size_t down = bit ? pairs_[k].second : pairs_[k].first;
      idx |= Index{1} << (width_ - 1 - down);
    }
    return idx;
  }

  /// Columns are the encoded logical basis states (isometry 2^w x 2^np).
  Matrix isometry() const {
    const Index nl = Index{1} << pairs_.size();
    Matrix v = Matrix::Zero(Index{1} << width_, nl);
    for (Index l = 0; l < nl; ++l) v(physical_index(l), l) = 1.0;
    return v;
  }

  Matrix code_projector() const {
    const Matrix v = isometry();
    return v * v.adjoint();
  }

 private:
  std::vector<IonPair> pairs_;
  std::size_t width_;
};

struct LogicalOperators {
  OperatorSum x, y, z;
};

/// Encoded X, Y, Z of a pair: (XX+YY)/2, (YX-XY)/2, (ZI-IZ)/2.
inline LogicalOperators logical_operators(const IonPair& p, std::size_t width) {
  check_pair(p, width);
  const auto i = p.first, j = p.second;
  LogicalOperators ops{OperatorSum(width), OperatorSum(width),
                       OperatorSum(width)};
  ops.x = 0.5 * (OperatorSum::sites(width, i, Pauli::X, j, Pauli::X) +
                 OperatorSum::sites(width, i, Pauli::Y, j, Pauli::Y));
  ops.y = 0.5 * (OperatorSum::sites(width, i, Pauli::Y, j, Pauli::X) -
                 OperatorSum::sites(width, i, Pauli::X, j, Pauli::Y));
  ops.z = 0.5 * (OperatorSum::site(width, i, Pauli::Z) -
                 OperatorSum::site(width, j, Pauli::Z));
  return ops;
}

struct TildeOperators {
  OperatorSum x, y;
};

/// (XX-YY)/2 and (YX+XY)/2: encoded X, Y on span{|down,down>, |up,up>}.
inline TildeOperators tilde_operators(const IonPair& p, std::size_t width) {
  check_pair(p, width);
  const auto i = p.first, j = p.second;
  TildeOperators ops{OperatorSum(width), OperatorSum(width)};
  ops.x = 0.5 * (OperatorSum::sites(width, i, Pauli::X, j, Pauli::X) -
                 OperatorSum::sites(width, i, Pauli::Y, j, Pauli::Y));
  ops.y = 0.5 * (OperatorSum::sites(width, i, Pauli::Y, j, Pauli::X) +
                 OperatorSum::sites(width, i, Pauli::X, j, Pauli::Y));
  return ops;
}

enum class ErrorClass { Dfs, Leak, Logical };

/// Labels of the 16-element two-qubit basis. "S" is (ZI+IZ)/2.
inline const std::array<const char*, 16>& class_basis_labels() {
  static const std::array<const char*, 16> labels = {
      "II", "S",  "Xt", "Yt", "ZZ", "XI", "IX",   "YI",
      "IY", "XZ", "ZX", "YZ", "ZY", "Xbar", "Ybar", "Zbar"};
  return labels;
}

inline ErrorClass class_of(const std::string& label) {
  if (label == "II" || label == "S" || label == "Xt" || label == "Yt" ||
      label == "ZZ")
    return ErrorClass::Dfs;
  if (label == "Xbar" || label == "Ybar" || label == "Zbar")
    return ErrorClass::Logical;
  return ErrorClass::Leak;
}

/// The basis element `label` placed on pair p of a width-qubit register.
inline OperatorSum class_basis_operator(const std::string& label,
                                        const IonPair& p, std::size_t width) {
  check_pair(p, width);
  const auto i = p.first, j = p.second;
  auto two = [&](Pauli a, Pauli b) {
    std::string f(width, 'I');
    f[i] = to_char(a);
    f[j] = to_char(b);
    return OperatorSum::term(f);
  };
  if (label == "S")
    return 0.5 * (two(Pauli::Z, Pauli::I) + two(Pauli::I, Pauli::Z));
  if (label == "Xt") return tilde_operators(p, width).x;
  if (label == "Yt") return tilde_operators(p, width).y;
  if (label == "Xbar") return logical_operators(p, width).x;
  if (label == "Ybar") return logical_operators(p, width).y;
  if (label == "Zbar") return logical_operators(p, width).z;
  if (label.size() == 2)
    return two(pauli_from_char(label[0]), pauli_from_char(label[1]));
  throw DomainError("unknown basis label " + label);
}

/**
 * Coefficients of an operator on the 16-element basis, per attached bath
 * word, with the three class buckets and the individual logical parts.
 */
struct ErrorDecomposition {
  IonPair pair;
  std::size_t width = 2;
  std::map<std::pair<std::string, BathWord>, cplx> coefficients;
  OperatorSum dfs_part, leak_part, logi_part;
  OperatorSum x_bar_part, y_bar_part, z_bar_part;

  OperatorSum recomposed() const { return dfs_part + leak_part + logi_part; }
};

/// Exact decomposition of an operator supported on one pair.
inline ErrorDecomposition classify(const OperatorSum& h, const IonPair& p) {
  const std::size_t width = h.width();
  check_pair(p, width);
  ErrorDecomposition d;
  d.pair = p;
  d.width = width;
  d.dfs_part = d.leak_part = d.logi_part = OperatorSum(width);
  d.x_bar_part = d.y_bar_part = d.z_bar_part = OperatorSum(width);

  auto put = [&](const std::string& label, const BathWord& b, cplx c) {
    if (c != cplx(0.0)) d.coefficients[{label, b}] += c;
  };
  for (const auto& t : h.terms()) {
    for (std::size_t k = 0; k < width; ++k)
      if (k != p.first && k != p.second && t.factors[k] != 'I')
        throw DomainError("classify: term " + t.factors +
                          " acts outside the pair");
    const std::string ab{t.factors[p.first], t.factors[p.second]};
    const cplx c = t.coefficient;
    const BathWord& b = t.bath;
    // Inversions of the basis definitions, e.g. XX = Xbar + Xt.
    if (ab == "II") {
      put("II", b, c);
    } else if (ab == "ZI") {
      put("S", b, c);
      put("Zbar", b, c);
    } else if (ab == "IZ") {
      put("S", b, c);
      put("Zbar", b, -c);
    } else if (ab == "XX") {
      put("Xbar", b, c);
      put("Xt", b, c);
    } else if (ab == "YY") {
      put("Xbar", b, c);
      put("Xt", b, -c);
    } else if (ab == "YX") {
      put("Ybar", b, c);
      put("Yt", b, c);
    } else if (ab == "XY") {
      put("Ybar", b, -c);
      put("Yt", b, c);
    } else {
      put(ab, b, c);  // ZZ and the eight leakage strings
    }
  }

  for (const auto& [key, c] : d.coefficients) {
    const auto& [label, bath] = key;
    OperatorSum piece = c * class_basis_operator(label, p, width);
    for (const auto& slot : bath) piece = piece.with_bath(slot);
    switch (class_of(label)) {
      case ErrorClass::Dfs:
        d.dfs_part += piece;
        break;
      case ErrorClass::Leak:
        d.leak_part += piece;
        break;
      case ErrorClass::Logical:
        d.logi_part += piece;
        if (label == "Xbar") d.x_bar_part += piece;
        if (label == "Ybar") d.y_bar_part += piece;
        if (label == "Zbar") d.z_bar_part += piece;
        break;
    }
  }
  return d;
}

/// Encoding map on state vectors: logical amplitudes -> physical amplitudes.
inline Vector encode(const Vector& logical, const DfsRegister& reg) {
  const Index nl = Index{1} << reg.logical_qubits();
  if (logical.size() != nl)
    throw DimensionError("encode: logical state has dimension " +
                         std::to_string(logical.size()) + ", expected " +
                         std::to_string(nl));
  return reg.isometry() * logical;
}

/// 1 - <P_code> for a pure state on the register (normalised internally).
inline double leakage_probability(const Vector& psi, const DfsRegister& reg) {
  if (psi.size() != (Index{1} << reg.width()))
    throw DimensionError("leakage_probability: state dimension mismatch");
  const double total = psi.squaredNorm();
  double inside = 0.0;
  const Index nl = Index{1} << reg.logical_qubits();
  for (Index l = 0; l < nl; ++l) inside += std::norm(psi(reg.physical_index(l)));
  return std::clamp(1.0 - inside / total, 0.0, 1.0);
}

/// Same metric for a density matrix on register (x) bath; the bath is traced.
inline double leakage_probability(const Matrix& rho, const DfsRegister& reg,
                                  Index bath_dim = 1) {
  const Index ds = Index{1} << reg.width();
  if (rho.rows() != ds * bath_dim || rho.cols() != rho.rows())
    throw DimensionError("leakage_probability: density matrix dimension");
  const double total = rho.trace().real();
  double inside = 0.0;
  const Index nl = Index{1} << reg.logical_qubits();
  for (Index l = 0; l < nl; ++l) {
    const Index s = reg.physical_index(l);
    for (Index b = 0; b < bath_dim; ++b)
      inside += rho(s * bath_dim + b, s * bath_dim + b).real();
  }
  return std::clamp(1.0 - inside / total, 0.0, 1.0);
}

/// Spectral norms of the Xbar, Ybar, Zbar and Leak buckets.
inline std::map<std::string, double> logical_error_norms(
    const ErrorDecomposition& d, const Layout& layout,
    const BathBindings& bindings = {}) {
  return {{"Leak", spectral_norm(to_dense(d.leak_part, layout, bindings))},
          {"Xbar", spectral_norm(to_dense(d.x_bar_part, layout, bindings))},
          {"Ybar", spectral_norm(to_dense(d.y_bar_part, layout, bindings))},
          {"Zbar", spectral_norm(to_dense(d.z_bar_part, layout, bindings))}};
}

/**
 * Class buckets of a dense operator on (register (x) bath), projected on the
 * 16-element basis of one pair with identity on every other qubit. `outside`
 * is whatever that projection misses.
 */
struct DenseBuckets {
  Matrix dfs, leak, x_bar, y_bar, z_bar, outside;

  Matrix logical() const { return x_bar + y_bar + z_bar; }
  std::map<std::string, double> norms() const {
    return {{"DFS", spectral_norm(dfs)},        {"Leak", spectral_norm(leak)},
            {"Xbar", spectral_norm(x_bar)},     {"Ybar", spectral_norm(y_bar)},
            {"Zbar", spectral_norm(z_bar)},     {"Logi", spectral_norm(logical())},
            {"outside", spectral_norm(outside)}};
  }
};

inline DenseBuckets dense_buckets(const Matrix& h, const Layout& layout,
                                  const IonPair& p) {
  check_pair(p, layout.qubits);
  if (h.rows() != layout.dim())
    throw DimensionError("dense_buckets: dimension mismatch");
  const Index db = layout.bath_dim();
  const Index n = h.rows();
  DenseBuckets out;
  out.dfs = out.leak = out.x_bar = out.y_bar = out.z_bar = Matrix::Zero(n, n);
  const Layout sys{layout.qubits, {}};
  for (const char* label : class_basis_labels()) {
    const Matrix s = to_dense(class_basis_operator(label, p, layout.qubits), sys);
    const Matrix piece = kron(s, bath_component(h, s, db));
    const std::string l = label;
    switch (class_of(l)) {
      case ErrorClass::Dfs:
        out.dfs += piece;
        break;
      case ErrorClass::Leak:
        out.leak += piece;
        break;
      case ErrorClass::Logical:
        (l == "Xbar" ? out.x_bar : l == "Ybar" ? out.y_bar : out.z_bar) += piece;
        break;
    }
  }
  out.outside = h - out.dfs - out.leak - out.logical();
  return out;
}

}  // namespace erd

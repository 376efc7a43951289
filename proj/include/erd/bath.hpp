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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "erd/dense.hpp"
#include "erd/dfs.hpp"
#include "erd/errors.hpp"
#include "erd/pauli.hpp"

namespace erd {

inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J / K

/**
 * Two-qubit dephasing Z_i (x) b1 + Z_j (x) b2 on a finite-dimensional bath,
 * with optional bath self-Hamiltonian.
 */
class DephasingBath {
 public:
  DephasingBath(Matrix b1, Matrix b2, std::optional<Matrix> h_bath = {})
      : b1_(std::move(b1)), b2_(std::move(b2)), h_bath_(std::move(h_bath)) {
    if (b1_.rows() != b2_.rows() || b1_.rows() != b1_.cols() ||
        b2_.rows() != b2_.cols())
      throw DimensionError("DephasingBath: b1, b2 must be square and equal size");
    if (!is_hermitian(b1_) || !is_hermitian(b2_))
      throw DomainError("DephasingBath: bath operators must be Hermitian");
    if (h_bath_) {
      if (h_bath_->rows() != b1_.rows() || h_bath_->cols() != b1_.cols())
        throw DimensionError("DephasingBath: H_B dimension mismatch");
      if (!is_hermitian(*h_bath_))
        throw DomainError("DephasingBath: H_B must be Hermitian");
    }
  }

  /// From collective and differential parts: b1 = col + dif, b2 = col - dif.
  static DephasingBath from_col_dif(const Matrix& col, const Matrix& dif,
                                    std::optional<Matrix> h_bath = {}) {
    return DephasingBath(col + dif, col - dif, std::move(h_bath));
  }

  const Matrix& b1() const { return b1_; }
  const Matrix& b2() const { return b2_; }
  Matrix b_col() const { return 0.5 * (b1_ + b2_); }
  Matrix b_dif() const { return 0.5 * (b1_ - b2_); }
  const std::optional<Matrix>& h_bath() const { return h_bath_; }
  Index bath_dim() const { return b1_.rows(); }

  /// Z_i B1 + Z_j B2 with slots "B1", "B2".
  OperatorSum coupling(const IonPair& p, std::size_t width = 2) const {
    check_pair(p, width);
    return OperatorSum::site(width, p.first, Pauli::Z).with_bath("B1") +
           OperatorSum::site(width, p.second, Pauli::Z).with_bath("B2");
  }

  BathBindings bindings() const { return {{"B1", b1_}, {"B2", b2_}}; }

  Layout layout(std::size_t width = 2) const { return {width, {bath_dim()}}; }

  /// Dense H_SB + I (x) H_B.
  Matrix hamiltonian(const IonPair& p = {0, 1}, std::size_t width = 2) const {
    const Layout l = layout(width);
    Matrix h = to_dense(coupling(p, width), l, bindings());
    if (h_bath_) h += kron(Matrix::Identity(l.system_dim(), l.system_dim()), *h_bath_);
    return h;
  }

 private:
  Matrix b1_, b2_;
  std::optional<Matrix> h_bath_;
};

/// Damped oscillator coupled to bath modes. Frequencies in rad/s.
struct VibBath {
  double gamma = 0.0;
  std::vector<double> mode_freqs;
  double omega0 = 0.0;
  std::size_t n_trunc = 2;
  double temperature = 0.0;

  void validate() const {
    if (n_trunc < 2) throw DomainError("VibBath: n_trunc must be >= 2");
    if (!(gamma >= 0.0)) throw DomainError("VibBath: gamma must be >= 0");
  }
};

struct VibModel {
  OperatorSum h;  ///< zero-qubit operator over oscillator slots
  Layout layout;  ///< no qubits; one factor per oscillator (system mode first)
  BathBindings bindings;

  Matrix dense() const { return to_dense(h, layout, bindings); }
};

/// Truncated annihilation operator.
inline Matrix annihilation(std::size_t n) {
  Matrix a = Matrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t k = 1; k < n; ++k)
    a(static_cast<Index>(k - 1), static_cast<Index>(k)) = std::sqrt(double(k));
  return a;
}

/**
 * H / hbar = w0 a+a + sum_k w_k b_k+ b_k + gamma sum_k (a b_k+ + a+ b_k) on
 * truncated Fock spaces. Slots: "a", "a+", "b<k>", "b<k>+".
 */
inline VibModel vib_hamiltonian(const VibBath& v) {
  v.validate();
  const std::size_t modes = v.mode_freqs.size() + 1;
  VibModel m;
  m.layout.qubits = 0;
  m.layout.bath_dims.assign(modes, static_cast<Index>(v.n_trunc));
  const Matrix a = annihilation(v.n_trunc);
  auto embed = [&](std::size_t site, const Matrix& op) {
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t k = 0; k < modes; ++k)
      out = kron(out, k == site ? op
                                : Matrix::Identity(static_cast<Index>(v.n_trunc),
                                                   static_cast<Index>(v.n_trunc)));
    return out;
  };
  m.bindings["a"] = embed(0, a);
  m.bindings["a+"] = embed(0, a.adjoint());
  m.h = OperatorSum(0);
  m.h.add(PauliTerm("", v.omega0, {"a+", "a"}));
  for (std::size_t k = 0; k < v.mode_freqs.size(); ++k) {
    const std::string b = "b" + std::to_string(k);
    m.bindings[b] = embed(k + 1, a);
    m.bindings[b + "+"] = embed(k + 1, a.adjoint());
    m.h.add(PauliTerm("", v.mode_freqs[k], {b + "+", b}));
    m.h.add(PauliTerm("", v.gamma, {"a", b + "+"}));
    m.h.add(PauliTerm("", v.gamma, {"a+", b}));
  }
  return m;
}

/// a+a + sum_k b_k+ b_k on the same layout.
inline Matrix excitation_number(const VibModel& m) {
  Matrix n = bath_word_matrix({"a+", "a"}, m.layout.bath_dim(), m.bindings);
  for (std::size_t k = 0; k + 1 < m.layout.bath_dims.size(); ++k) {
    const std::string b = "b" + std::to_string(k);
    n += bath_word_matrix({b + "+", b}, m.layout.bath_dim(), m.bindings);
  }
  return n;
}

struct ThermalNumbers {
  double n_mean = 0.0;
  double t_dec = 0.0;
  bool t_dec_infinite = false;
};

/// n(T) = 1/(exp(hbar w0 / kB T) - 1), t_dec = 1/(gamma (1 + 2 n)).
inline ThermalNumbers thermal_numbers(const VibBath& v) {
  if (!(v.temperature > 0.0)) throw DomainError("thermal_numbers: T must be > 0");
  if (!(v.gamma >= 0.0)) throw DomainError("thermal_numbers: gamma must be >= 0");
  if (!(v.omega0 > 0.0)) throw DomainError("thermal_numbers: omega0 must be > 0");
  ThermalNumbers out;
  out.n_mean = 1.0 / std::expm1(kHbar * v.omega0 / (kBoltzmann * v.temperature));
  if (v.gamma == 0.0) {
    out.t_dec = std::numeric_limits<double>::infinity();
    out.t_dec_infinite = true;
  } else {
    out.t_dec = 1.0 / (v.gamma * (1.0 + 2.0 * out.n_mean));
  }
  return out;
}

inline constexpr double kTimescaleMargin = 10.0;

struct TimescaleCheck {
  bool satisfied = false;
  double margin = 0.0;
};

/// margin = min(1/omega_c, t_dec) / dt; satisfied when margin >= 10 up to
/// rounding.
inline TimescaleCheck timescale_check(double dt, double omega_c, double t_dec) {
  if (!(dt > 0.0)) throw DomainError("timescale_check: dt must be > 0");
  const double inv_wc =
      omega_c > 0.0 ? 1.0 / omega_c : std::numeric_limits<double>::infinity();
  const double margin = std::min(inv_wc, t_dec) / dt;
  return {margin >= kTimescaleMargin * (1.0 - 1e-12), margin};
}

/// (Y_i + Y_j) (x) B: qubit decoherence from motional decoherence.
inline OperatorSum qubit_motional_error(const IonPair& p, std::size_t width = 2,
                                        const std::string& slot = "B") {
  check_pair(p, width);
  return (OperatorSum::site(width, p.first, Pauli::Y) +
          OperatorSum::site(width, p.second, Pauli::Y))
      .with_bath(slot);
}

struct BchBound {
  double bound = 0.0;
  double t_max_weak = 0.0;
};

/**
 * Leading BCH deviation of U(t) K U(t) K from exp(-2it(H_S + H_B)), K a
 * parity kick flipping H_SB: t^2 ||[H_SB, H_S] + [H_SB, H_B]||. The
 * weak-drive window is 1/sqrt(omega gamma_sb).
 */
inline BchBound bch_bound(const Matrix& h_s, const Matrix& h_sb,
                          const Matrix& h_b, double t, double omega,
                          double gamma_sb) {
  if (h_s.rows() != h_sb.rows() || h_b.rows() != h_sb.rows())
    throw DimensionError("bch_bound: dimension mismatch");
  BchBound out;
  out.bound = t * t * spectral_norm(commutator(h_sb, h_s) + commutator(h_sb, h_b));
  out.t_max_weak = omega > 0.0 && gamma_sb > 0.0
                       ? 1.0 / std::sqrt(omega * gamma_sb)
                       : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace erd

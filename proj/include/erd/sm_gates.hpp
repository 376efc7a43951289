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
#include <string>
#include <vector>

#include "erd/dense.hpp"
#include "erd/dfs.hpp"
#include "erd/errors.hpp"
#include "erd/pauli.hpp"

namespace erd {

/**
 * Parameters of a Sorensen-Molmer gate: rotation angle and one laser phase
 * per participating ion (2 ions for U_ij, 4 for the four-ion gate).
 */
struct SmGateSpec {
  double theta = 0.0;
  std::vector<double> phi;
  std::vector<std::size_t> ions;

  SmGateSpec() = default;
  SmGateSpec(double th, std::vector<double> ph, std::vector<std::size_t> io)
      : theta(th), phi(std::move(ph)), ions(std::move(io)) {
    if (ions.size() != 2 && ions.size() != 4)
      throw DomainError("SmGateSpec: 2 or 4 ions required");
    if (phi.size() != ions.size())
      throw DomainError("SmGateSpec: one phase per ion required");
  }

  static SmGateSpec pair(double th, double phi_i, double phi_j,
                         IonPair p = {0, 1}) {
    return SmGateSpec(th, {phi_i, phi_j}, {p.first, p.second});
  }

  /// phi_i - phi_j
  double relative_phase() const { return phi.at(0) - phi.at(1); }
  /// phi_i + phi_j
  double phase_sum() const { return phi.at(0) + phi.at(1); }
  IonPair ion_pair() const { return {ions.at(0), ions.at(1)}; }

  friend bool operator==(const SmGateSpec&, const SmGateSpec&) = default;
};

/// X cos(phi) + Y sin(phi) on one qubit.
inline OperatorSum x_phi(double phi) {
  return OperatorSum::term("X", std::cos(phi)) +
         OperatorSum::term("Y", std::sin(phi));
}

/// X_phi on `site` of a width-qubit register.
inline OperatorSum x_phi_on(std::size_t width, std::size_t site, double phi) {
  return OperatorSum::site(width, site, Pauli::X, std::cos(phi)) +
         OperatorSum::site(width, site, Pauli::Y, std::sin(phi));
}

/// Product of X_phi over every ion of the spec.
inline OperatorSum sm_generator(const SmGateSpec& spec, std::size_t width) {
  OperatorSum g = OperatorSum::identity(width);
  for (std::size_t k = 0; k < spec.ions.size(); ++k) {
    if (spec.ions[k] >= width) throw DomainError("ion index out of range");
    g = g * x_phi_on(width, spec.ions[k], spec.phi[k]);
  }
  return g;
}

/// exp(i theta X_phi_i X_phi_j) = cos(theta) I + i sin(theta) X_phi_i X_phi_j.
inline Matrix sm_unitary(const SmGateSpec& spec, std::size_t width = 2) {
  if (spec.ions.size() != 2) throw DomainError("sm_unitary: 2 ions required");
  check_pair({std::min(spec.ions[0], spec.ions[1]),
              std::max(spec.ions[0], spec.ions[1])},
             width);
  const Matrix g = to_dense(sm_generator(spec, width));
  const Index n = g.rows();
  return std::cos(spec.theta) * Matrix::Identity(n, n) +
         cplx(0.0, std::sin(spec.theta)) * g;
}

/// Coefficients of sm_unitary on {I, Xbar, Ybar, Xt, Yt}.
struct SmDecomposition {
  cplx identity, x_bar, y_bar, x_tilde, y_tilde;
};

inline SmDecomposition sm_decompose(const SmGateSpec& spec) {
  if (spec.ions.size() != 2) throw DomainError("sm_decompose: 2 ions required");
  const cplx is(0.0, std::sin(spec.theta));
  const double dphi = spec.relative_phase();
  const double sphi = spec.phase_sum();
  return {std::cos(spec.theta), is * std::cos(dphi), is * std::sin(dphi),
          is * std::cos(sphi), is * std::sin(sphi)};
}

inline Matrix recompose(const SmDecomposition& d, const IonPair& p,
                        std::size_t width) {
  const auto bars = logical_operators(p, width);
  const auto tildes = tilde_operators(p, width);
  return to_dense(OperatorSum::identity(width, d.identity) + d.x_bar * bars.x +
                  d.y_bar * bars.y + d.x_tilde * tildes.x +
                  d.y_tilde * tildes.y);
}

/**
 * Code-subspace block of u in the encoded basis of `reg`. Throws LeakageError
 * when u maps code states outside the code subspace by more than `tol`.
 */
inline Matrix dfs_restrict(const Matrix& u, const DfsRegister& reg,
                           double tol = 1e-10) {
  const Matrix v = reg.isometry();
  if (u.rows() != v.rows() || u.cols() != v.rows())
    throw DimensionError("dfs_restrict: operator dimension mismatch");
  const Matrix uv = u * v;
  const Matrix block = v.adjoint() * uv;
  const double off = std::max(spectral_norm(uv - v * block),
                              spectral_norm(u.adjoint() * v - v * (v.adjoint() *
                                                                   u.adjoint() * v)));
  if (off > tol) throw LeakageError(off);
  return block;
}

inline Matrix dfs_restrict(const Matrix& u, const IonPair& p,
                           std::size_t width = 2) {
  if (width != 2) throw DomainError("dfs_restrict: single pair needs width 2");
  return dfs_restrict(u, DfsRegister({p}, width));
}

/**
 * Block of a joint (register (x) bath) operator on code (x) bath, dimension
 * 2^np * bath_dim. No leakage check: the off-block part is what is being
 * measured when this is used on noisy propagators.
 */
inline Matrix code_block(const Matrix& u, const DfsRegister& reg,
                         Index bath_dim) {
  const Matrix w = kron(reg.isometry(), Matrix::Identity(bath_dim, bath_dim));
  return w.adjoint() * u * w;
}

enum class Axis { X, Y, Z };

inline const OperatorSum& axis_operator(const LogicalOperators& ops, Axis a) {
  return a == Axis::X ? ops.x : a == Axis::Y ? ops.y : ops.z;
}

/**
 * exp(i theta A) for A one of the encoded operators of `p`. Each satisfies
 * A^3 = A with A^2 the code projector, so the exponential is
 * I + (cos(theta) - 1) A^2 + i sin(theta) A.
 */
inline Matrix logical_rotation(const IonPair& p, Axis axis, double theta,
                               std::size_t width = 2) {
  const Matrix a = to_dense(axis_operator(logical_operators(p, width), axis));
  const Index n = a.rows();
  return Matrix::Identity(n, n) + (std::cos(theta) - 1.0) * (a * a) +
         cplx(0.0, std::sin(theta)) * a;
}

/// The DFS-restricted gate U-bar(theta, dphi) realised as a physical U_ij with
/// phases (dphi, 0).
inline SmGateSpec ubar(double theta, double dphi, const IonPair& p = {0, 1}) {
  return SmGateSpec::pair(theta, dphi, 0.0, p);
}

/// Gate program whose product (leftmost applied last) restricts on the code
/// subspace to exp(i theta A_axis).
inline std::vector<SmGateSpec> logical_gate(Axis axis, double theta,
                                            const IonPair& p = {0, 1}) {
  switch (axis) {
    case Axis::X:
      return {ubar(theta, 0.0, p)};
    case Axis::Y:
      return {ubar(theta, M_PI / 2, p)};
    case Axis::Z:
      return {ubar(M_PI / 4, M_PI / 2, p), ubar(theta, 0.0, p),
              ubar(-M_PI / 4, M_PI / 2, p)};
  }
  throw DomainError("logical_gate: bad axis");
}

inline Matrix program_unitary(const std::vector<SmGateSpec>& program,
                              std::size_t width = 2) {
  const Index n = Index{1} << width;
  Matrix u = Matrix::Identity(n, n);
  for (const auto& g : program) u = u * sm_unitary(g, width);
  return u;
}

inline constexpr double kU4Theta = M_PI / 4;

/// Four-ion gate spec at the standard angle pi/4.
inline SmGateSpec u4_spec(std::vector<double> phi,
                          std::vector<std::size_t> ions = {0, 1, 2, 3}) {
  return SmGateSpec(kU4Theta, std::move(phi), std::move(ions));
}

/**
 * exp(-i theta X_phi1 X_phi2 X_phi3 X_phi4). theta other than pi/4 is an
 * extension; the code-space entangling property is specific to pi/4.
 */
inline Matrix u4(const SmGateSpec& spec, std::size_t width = 4) {
  if (spec.ions.size() != 4) throw DomainError("u4: 4 ions required");
  const Matrix g = to_dense(sm_generator(spec, width));
  const Index n = g.rows();
  return std::cos(spec.theta) * Matrix::Identity(n, n) -
         cplx(0.0, std::sin(spec.theta)) * g;
}

/// Encoded X_dphi = cos(dphi) Xbar + sin(dphi) Ybar in the 2x2 code basis.
inline Matrix logical_x_phi_block(double dphi) {
  const Matrix xb = dfs_restrict(to_dense(logical_operators({0, 1}, 2).x), IonPair{0, 1});
  const Matrix yb = dfs_restrict(to_dense(logical_operators({0, 1}, 2).y), IonPair{0, 1});
  return std::cos(dphi) * xb + std::sin(dphi) * yb;
}

// Hardware-scale formulas. Frequencies are angular (rad/s), times in seconds.

struct HardwareParams {
  double eta = 0.1;          ///< Lamb-Dicke parameter
  double omega_rabi = 0.0;   ///< Rabi frequency, rad/s
  double detuning = 0.0;     ///< laser detuning, rad/s
  double n_mean = 0.0;       ///< mean vibrational occupation
  int k_int = 1;             ///< integer K of the gate-time formula
  int n_ions = 2;            ///< ions participating in the gate

  void validate() const {
    if (!(eta > 0.0)) throw DomainError("eta must be positive");
    if (!(omega_rabi > 0.0)) throw DomainError("omega_rabi must be positive");
    if (k_int < 1) throw DomainError("k_int must be >= 1");
    if (n_mean < 0.0) throw DomainError("n_mean must be >= 0");
  }
};

/// Time to prepare a maximally entangled state: pi sqrt(K) / (eta Omega).
inline double tau_sm(const HardwareParams& p) {
  p.validate();
  return M_PI * std::sqrt(static_cast<double>(p.k_int)) / (p.eta * p.omega_rabi);
}

/// Threshold standing in for "much less than one" in the Lamb-Dicke check.
inline constexpr double kLambDickeLimit = 0.1;

struct LambDicke {
  double margin;            ///< (n + 1) eta^2
  double infidelity_scale;  ///< eta^4
  bool within_limit;        ///< margin <= kLambDickeLimit
};

inline LambDicke lamb_dicke_margin(const HardwareParams& p) {
  p.validate();
  const double m = (p.n_mean + 1.0) * p.eta * p.eta;
  return {m, std::pow(p.eta, 4), m <= kLambDickeLimit};
}

struct OffResonantPenalty {
  double value;       ///< (N/2)(Omega/delta)^2
  bool perturbative;  ///< false once Omega/delta >= 1
};

inline OffResonantPenalty off_resonant_penalty(const HardwareParams& p) {
  if (p.detuning == 0.0) throw DomainError("off_resonant_penalty: detuning is 0");
  const double r = p.omega_rabi / p.detuning;
  return {0.5 * p.n_ions * r * r, std::abs(r) < 1.0};
}

struct CancellationConstraints {
  double delta_required;  ///< m K' Omega
  double eta_required;    ///< m sqrt(K)
  double lamb_dicke_margin;
  bool lamb_dicke_compatible;
};

/**
 * Conditions for cancelling the off-resonant term exactly while keeping
 * Omega tau_SM = pi/m; the eta they force is checked against the Lamb-Dicke
 * limit.
 */
inline CancellationConstraints cancellation_constraints(
    int m, const HardwareParams& p, int k_prime = 1) {
  if (m < 1) throw DomainError("cancellation_constraints: m must be >= 1");
  if (k_prime < 1) throw DomainError("cancellation_constraints: K' must be >= 1");
  p.validate();
  const double eta = m * std::sqrt(static_cast<double>(p.k_int));
  const double margin = (p.n_mean + 1.0) * eta * eta;
  return {m * k_prime * p.omega_rabi, eta, margin, margin <= kLambDickeLimit};
}

}  // namespace erd

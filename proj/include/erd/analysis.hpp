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
#include <map>
#include <string>
#include <vector>

#include "erd/dense.hpp"
#include "erd/dfs.hpp"
#include "erd/errors.hpp"
#include "erd/sequence.hpp"
#include "erd/sm_gates.hpp"

namespace erd {

/// Effective generator of one cycle: exp(-i H T) = propagator, T = cycle time.
inline Matrix effective_generator(const PulseSequence& seq, const OpenSystem& sys) {
  return generator_of(propagator(seq, sys), seq.cycle_time());
}

/**
 * Accumulated error phase per bucket over one cycle: T * ||bucket of H_eff||
 * for the class buckets of pair `p`.
 */
inline std::map<std::string, double> cycle_phase_buckets(const PulseSequence& seq,
                                                         const OpenSystem& sys,
                                                         const IonPair& p = {0, 1}) {
  const Matrix h = effective_generator(seq, sys);
  auto norms = dense_buckets(h, sys.layout, p).norms();
  for (auto& [k, v] : norms) v *= seq.cycle_time();
  return norms;
}

/// Sum of Z over ions [first, first + 4).
inline Matrix block_z_sum(std::size_t qubits, std::size_t first) {
  OperatorSum s(qubits);
  for (std::size_t k = first; k < first + 4; ++k) s += OperatorSum::site(qubits, k, Pauli::Z);
  return to_dense(s);
}

/**
 * Part of a joint operator that is not of the form I (x) B_0 + sum_b S_b (x)
 * B_b, S_b the Z-sum over 4-ion block b.
 */
inline Matrix block_collective_residual(const Matrix& h, std::size_t n_ions,
                                        Index bath_dim) {
  if (n_ions == 0 || n_ions % 4 != 0)
    throw DomainError("block_collective_residual: N must be a multiple of 4");
  const Index ds = Index{1} << n_ions;
  if (h.rows() != ds * bath_dim) throw DimensionError("block_collective_residual: dimension mismatch");
  const Matrix id = Matrix::Identity(ds, ds);
  Matrix r = h - kron(id, bath_component(h, id, bath_dim));
  for (std::size_t b = 0; b < n_ions; b += 4) {
    const Matrix s = block_z_sum(n_ions, b);
    r -= kron(s, bath_component(h, s, bath_dim));
  }
  return r;
}

/// ||[u, h] (P_code (x) I_B)||: the commutator seen from code (x) bath.
inline double code_space_commutator(const Matrix& u, const Matrix& h,
                                    const DfsRegister& reg, Index bath_dim) {
  const Matrix proj = kron(reg.code_projector(), Matrix::Identity(bath_dim, bath_dim));
  const Matrix big_u = u.rows() == h.rows() ? u : kron(u, Matrix::Identity(bath_dim, bath_dim));
  return spectral_norm(commutator(big_u, h) * proj);
}

/**
 * Gate fidelity of a joint propagator against target (x) I_B on code (x)
 * bath: |Tr(W^dagger (T (x) I))|^2 / (d_L d_B)^2 with W the code block.
 */
inline double code_fidelity(const Matrix& u, const Matrix& target,
                            const DfsRegister& reg, Index bath_dim) {
  const Matrix w = code_block(u, reg, bath_dim);
  const Matrix t = kron(target, Matrix::Identity(bath_dim, bath_dim));
  const double d = double(w.rows());
  return std::norm((w.adjoint() * t).trace()) / (d * d);
}

/// exp(-i angle A) on the 2x2 code basis, A = Xbar or Ybar.
inline Matrix logical_target(Axis axis, double angle) {
  const Matrix a = logical_x_phi_block(axis == Axis::X ? 0.0 : M_PI / 2);
  return std::cos(angle) * Matrix::Identity(2, 2) - cplx(0.0, std::sin(angle)) * a;
}

/// exp(-i a Xbar) exp(-i b Ybar) exp(-i c Xbar) on the code basis.
inline Matrix euler_target(const EulerAngles& e) {
  return logical_target(Axis::X, e.alpha) * logical_target(Axis::Y, e.beta) *
         logical_target(Axis::X, e.gamma);
}

/// Distance between 2x2 unitaries up to a global phase.
inline double phase_insensitive_distance(const Matrix& a, const Matrix& b) {
  const cplx ov = (a.adjoint() * b).trace();
  const cplx ph = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx(1.0);
  return max_abs(a * ph - b);
}

}  // namespace erd

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
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "erd/analysis.hpp"
#include "erd/bath.hpp"
#include "erd/dense.hpp"
#include "erd/dfs.hpp"
#include "erd/noise.hpp"
#include "erd/random.hpp"
#include "erd/sequence.hpp"
#include "erd/sm_gates.hpp"

namespace erd {

/// One verified property: measured value against an expectation.
struct Check {
  std::string name;
  double measured = 0.0;
  std::string expected;
  double tolerance = 0.0;
  bool pass = false;
};

inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v + 0.0);
  return buf;
}

/// measured <= tol
inline Check check_below(std::string name, double measured, double tol) {
  return {std::move(name), measured, "<= " + short_num(tol), tol, measured <= tol};
}

/// measured > threshold
inline Check check_above(std::string name, double measured, double threshold) {
  return {std::move(name), measured, "> " + short_num(threshold), threshold,
          measured > threshold};
}

/// |measured - expected| <= tol
inline Check check_near(std::string name, double measured, double expected,
                        double tol) {
  return {std::move(name), measured, short_num(expected), tol,
          std::abs(measured - expected) <= tol};
}

inline Check check_true(std::string name, bool ok) {
  return {std::move(name), ok ? 1.0 : 0.0, "1", 0.0, ok};
}

/// "PASS name measured=... expected=... tol=..."
inline std::string check_line(const Check& c) {
  return std::string(c.pass ? "PASS" : "FAIL") + "  " + c.name +
         "  measured=" + short_num(c.measured) + "  expected=" + c.expected +
         "  tol=" + short_num(c.tolerance);
}

namespace suite {

inline Matrix dense_bar(Axis a) {
  const auto ops = logical_operators({0, 1}, 2);
  return to_dense(axis_operator(ops, a));
}

/// Joint Hamiltonian with every non-identity class of pair (0,1) coupled to
/// its own random bath operator, plus a random H_B.
inline OpenSystem full_coupling(Index bath_dim, std::mt19937_64& rng,
                                double h_b_scale, double scale = 1.0) {
  OperatorSum h(2);
  BathBindings bind;
  int k = 0;
  for (const char* label : class_basis_labels()) {
    if (std::string(label) == "II") continue;
    const std::string slot = "B" + std::to_string(k++);
    bind[slot] = random_hermitian(bath_dim, rng);
    h += class_basis_operator(label, {0, 1}, 2).with_bath(slot);
  }
  const Layout lay{2, {bath_dim}};
  Matrix dense = scale * to_dense(h, lay, bind);
  if (h_b_scale != 0.0)
    dense += h_b_scale * kron(Matrix::Identity(4, 4), random_hermitian(bath_dim, rng));
  return {lay, dense};
}

/// Leakage-only coupling: the eight Leak classes with random bath operators.
inline Matrix leak_coupling(Index bath_dim, std::mt19937_64& rng) {
  OperatorSum h(2);
  BathBindings bind;
  int k = 0;
  for (const char* label : class_basis_labels()) {
    if (class_of(label) != ErrorClass::Leak) continue;
    const std::string slot = "B" + std::to_string(k++);
    bind[slot] = random_hermitian(bath_dim, rng);
    h += class_basis_operator(label, {0, 1}, 2).with_bath(slot);
  }
  const Matrix d = to_dense(h, Layout{2, {bath_dim}}, bind);
  return d / spectral_norm(d);
}

/// Norm of the sum of the named buckets of the effective generator, times
/// the cycle time.
inline double offending_phase(const PulseSequence& seq, const OpenSystem& sys,
                              const std::vector<std::string>& buckets) {
  const auto b = dense_buckets(effective_generator(seq, sys), sys.layout, {0, 1});
  Matrix m = Matrix::Zero(b.dfs.rows(), b.dfs.cols());
  for (const auto& name : buckets) {
    if (name == "Leak") m += b.leak;
    if (name == "Xbar") m += b.x_bar;
    if (name == "Ybar") m += b.y_bar;
    if (name == "Zbar") m += b.z_bar;
  }
  return seq.cycle_time() * spectral_norm(m);
}

/// log2 slope of f over tau, tau/2, tau/4.
template <class F>
double halving_slope(F&& f, double tau0) {
  std::vector<double> t, v;
  for (double tau : {tau0, tau0 / 2, tau0 / 4}) {
    t.push_back(tau);
    v.push_back(f(tau));
  }
  return loglog_slope(t, v);
}

}  // namespace suite

/**
 * Invariant checks across the library, randomised with `seed`. Each check
 * is deterministic for a given seed and trial count.
 */
inline std::vector<Check> algebra_suite(std::uint64_t seed, int trials) {
  using namespace suite;
  std::mt19937_64 rng(seed);
  std::vector<Check> out;
  const Matrix xb = dense_bar(Axis::X), yb = dense_bar(Axis::Y), zb = dense_bar(Axis::Z);
  const cplx two_i(0.0, 2.0);
  out.push_back(check_below(
      "pauli.su2_commutators",
      std::max({max_abs(commutator(xb, yb) - two_i * zb),
                max_abs(commutator(yb, zb) - two_i * xb),
                max_abs(commutator(zb, xb) - two_i * yb)}),
      1e-12));

  {
    // Symbolic and dense products agree.
    double worst = 0.0;
    const char labels[] = "IXYZ";
    std::uniform_int_distribution<int> pick(0, 3);
    for (int t = 0; t < trials; ++t) {
      std::string a(3, 'I'), b(3, 'I');
      for (int k = 0; k < 3; ++k) {
        a[k] = labels[pick(rng)];
        b[k] = labels[pick(rng)];
      }
      const OperatorSum pa = OperatorSum::term(a), pb = OperatorSum::term(b);
      worst = std::max(worst, max_abs(to_dense(pa * pb) - to_dense(pa) * to_dense(pb)));
    }
    out.push_back(check_below("pauli.product_matches_dense", worst, 1e-14));
  }

  {
    double closed = 0.0, block = 0.0, shift = 0.0;
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    for (int t = 0; t < trials; ++t) {
      const double th = ang(rng), pi_ = ang(rng), pj = ang(rng), c = ang(rng);
      const auto spec = SmGateSpec::pair(th, pi_, pj);
      const Matrix u = sm_unitary(spec);
      const Matrix g = to_dense(sm_generator(spec, 2));
      closed = std::max(closed, max_abs(u - expm_i(-g, th)));
      const Matrix expect = std::cos(th) * Matrix::Identity(2, 2) +
                            cplx(0.0, std::sin(th)) * logical_x_phi_block(pi_ - pj);
      block = std::max(block, max_abs(dfs_restrict(u, IonPair{0, 1}) - expect));
      const Matrix shifted = dfs_restrict(sm_unitary(SmGateSpec::pair(th, pi_ + c, pj + c)),
                                          IonPair{0, 1});
      shift = std::max(shift, max_abs(shifted - dfs_restrict(u, IonPair{0, 1})));
    }
    out.push_back(check_below("sm.closed_form_vs_expm", closed, 1e-12));
    out.push_back(check_below("sm.dfs_block", block, 1e-12));
    out.push_back(check_below("sm.common_phase_invariance", shift, 1e-12));
  }

  {
    const Matrix p = named_pulse(PulseLabel::P, {0, 1});
    const Matrix q = named_pulse(PulseLabel::Q, {0, 1});
    const Matrix pi_ = named_pulse(PulseLabel::Pi, {0, 1});
    const Matrix lam = named_pulse(PulseLabel::Lambda, {0, 1});
    const Matrix zz = pauli_string_matrix("ZZ");
    out.push_back(check_below("pulses.pi_equals_zz",
                              std::max(max_abs(pi_ - zz),
                                       max_abs(logical_rotation({0, 1}, Axis::X, -M_PI) - zz)),
                              1e-12));
    out.push_back(check_below("pulses.pp_pi_qq_lambda",
                              std::max(max_abs(p * p - pi_), max_abs(q * q - lam)), 1e-12));
    out.push_back(check_below("pulses.p_fourth_power",
                              max_abs(p * p * p * p - Matrix::Identity(4, 4)), 1e-12));
    out.push_back(check_below("pulses.pi_pdag_equals_p",
                              max_abs(pi_ * named_pulse(PulseLabel::Pdag, {0, 1}) - p), 1e-12));
  }

  {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const Matrix bc = random_hermitian(4, rng), bd = random_hermitian(4, rng);
      const auto bath = DephasingBath::from_col_dif(bc, bd);
      const OpenSystem sys{bath.layout(), bath.hamiltonian()};
      const double tau = 0.37;
      const Matrix ref = expm_i(kron(pauli_string_matrix("ZI") + pauli_string_matrix("IZ"), bc),
                                2 * tau);
      worst = std::max(worst, max_abs(propagator(symmetrize_pair(tau), sys) - ref));
    }
    out.push_back(check_below("decoupling.pair_symmetrization_exact", worst, 1e-10));
  }

  {
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
      const Matrix b = random_hermitian(3, rng);
      const Layout lay{2, {3}};
      const Matrix h = to_dense(qubit_motional_error({0, 1}), lay, {{"B", b}});
      const auto seq = leak_elim_cycle(0.29);
      const auto buckets = dense_buckets(effective_generator(seq, {lay, h}), lay, {0, 1});
      worst = std::max(worst, spectral_norm(buckets.leak));
      worst = std::max(worst, max_abs(propagator(seq, {lay, h}) - Matrix::Identity(12, 12)));
    }
    out.push_back(check_below("decoupling.leak_elimination_exact", worst, 1e-10));
  }

  {
    const auto bs = random_commuting_hermitian(4, 4, rng);
    OperatorSum h(4);
    BathBindings bind;
    for (std::size_t k = 0; k < 4; ++k) {
      const std::string s = "B" + std::to_string(k);
      bind[s] = bs[k];
      h += OperatorSum::site(4, k, Pauli::Z).with_bath(s);
    }
    const Layout lay{4, {4}};
    const auto heff = effective_generator(symmetrize_block4(0.21, 4), {lay, to_dense(h, lay, bind)});
    out.push_back(check_below("decoupling.block4_collective",
                              spectral_norm(block_collective_residual(heff, 4, 4)), 1e-10));
  }

  {
    const auto sys = full_coupling(2, rng, 1.0);
    auto slope = [&](PulseSequence (*f)(double, IonPair),
                     const std::vector<std::string>& b) {
      return halving_slope([&](double tau) { return offending_phase(f(tau, {0, 1}), sys, b); },
                           0.02);
    };
    out.push_back(check_near("decoupling.pair_sym_first_order",
                             slope(symmetrize_pair, {"Ybar", "Zbar"}), 2.0, 0.3));
    out.push_back(check_near("decoupling.pi_cycle_first_order",
                             slope(leak_elim_cycle, {"Leak"}), 2.0, 0.3));
    out.push_back(check_near("decoupling.four_pulse_first_order",
                             slope(four_pulse_cycle, {"Leak", "Ybar", "Zbar"}), 2.0, 0.3));
    out.push_back(check_near("decoupling.ten_pulse_first_order",
                             slope(ten_pulse_cycle, {"Leak", "Xbar", "Ybar", "Zbar"}), 2.0, 0.3));
  }

  {
    std::uniform_real_distribution<double> ang(-M_PI, M_PI);
    const Matrix u = u4(u4_spec({ang(rng), ang(rng), ang(rng), ang(rng)}));
    const Matrix b = random_hermitian(2, rng);
    const auto reg = DfsRegister::consecutive(2);
    const Matrix sum_z = block_z_sum(4, 0);
    const Matrix z13 = pauli_string_matrix("ZIII") - pauli_string_matrix("IIZI");
    out.push_back(check_below("sm.u4_commutes_with_collective",
                              code_space_commutator(u, kron(sum_z, b), reg, 2), 1e-12));
    out.push_back(check_above("sm.u4_breaks_differential",
                              code_space_commutator(u, kron(z13, b), reg, 2), 0.1));
  }

  {
    double comm = 0.0, rot = 0.0;
    for (Axis a : {Axis::X, Axis::Y}) {
      const Matrix hs = to_dense(drive_hamiltonian(a, {0, 1}, 2));
      for (auto l : {PulseLabel::P, PulseLabel::Pdag, PulseLabel::Pi, PulseLabel::Q,
                     PulseLabel::Qdag, PulseLabel::Lambda}) {
        const bool x_family = l == PulseLabel::P || l == PulseLabel::Pdag || l == PulseLabel::Pi;
        if (x_family != (a == Axis::X)) continue;
        comm = std::max(comm, max_abs(commutator(named_pulse(l, {0, 1}), hs)));
      }
      const double omega = 1.3, t = 0.9;
      const Matrix blk = dfs_restrict(propagator(combined_gate(a, t, omega), OpenSystem::closed(2)),
                                      IonPair{0, 1});
      rot = std::max(rot, max_abs(blk - logical_target(a, omega * t)));
    }
    out.push_back(check_below("gates.pulses_commute_with_drive", comm, 1e-12));
    out.push_back(check_below("gates.combined_closed_rotation", rot, 1e-12));
  }

  {
    double worst = 0.0;
    std::size_t pulses = 0;
    for (int t = 0; t < trials; ++t) {
      const Matrix target = random_su2(rng);
      const auto seq = euler_rotation(euler_angles(target), 1.0);
      pulses = std::max(pulses, seq.pulse_count());
      const Matrix blk = dfs_restrict(propagator(seq, OpenSystem::closed(2)), IonPair{0, 1});
      worst = std::max(worst, phase_insensitive_distance(blk, target));
    }
    out.push_back(check_below("gates.euler_synthesis", worst, 1e-8));
    out.push_back(check_below("gates.euler_pulse_count", double(pulses), 24));
  }

  {
    // Single-excitation Rabi flopping against the two-level closed form.
    const double w0 = 1.0, w1 = 1.3, g = 0.2;
    const auto m = vib_hamiltonian(VibBath{g, {w1}, w0, 2, 0.0});
    const Matrix h = m.dense();
    const HermitianPropagator prop(h);
    const double delta = w1 - w0, rabi = std::sqrt(4 * g * g + delta * delta);
    double worst = 0.0;
    for (double t : {0.3, 1.7, 4.2, 9.9}) {
      const cplx amp = prop(t)(1, 2);  // |n_a = 1, n_b = 0> -> |0, 1>
      const double p = 4 * g * g / (rabi * rabi) * std::pow(std::sin(rabi * t / 2), 2);
      worst = std::max(worst, std::abs(std::norm(amp) - p));
    }
    out.push_back(check_below("bath.single_excitation_rabi", worst, 1e-8));
    const auto m3 = vib_hamiltonian(VibBath{0.3, {0.9, 1.4}, 1.1, 3, 0.0});
    out.push_back(check_below("bath.excitation_conservation",
                              max_abs(commutator(m3.dense(), excitation_number(m3))), 1e-12));
  }

  {
    VibBath v;
    v.gamma = 2.0;
    v.omega0 = 1e6;
    v.temperature = kHbar * v.omega0 / (kBoltzmann * std::log(2.0));
    const auto th = thermal_numbers(v);
    out.push_back(check_near("bath.thermal_occupation_ln2", th.n_mean, 1.0, 1e-12));
    out.push_back(check_near("bath.t_dec_ln2", th.t_dec * 3 * v.gamma, 1.0, 1e-12));
  }

  {
    SpectralNoise s;
    s.alpha = 1.0;
    s.omega_min = 0.01;
    s.omega_max = 1.0;
    s.amplitude = 5.0;
    s.n_harmonics = 64;
    s.seed = seed;
    DephasingOptions o;
    o.mode = NoiseMode::Collective;
    o.n_traj = 20;
    o.horizon = 20.0;
    const auto r = dephasing_run(PulseSequence({Free{0.5}}), s, o);
    const double lowest = *std::min_element(r.coherence.begin(), r.coherence.end());
    out.push_back(check_below("noise.dfs_immunity", 1.0 - lowest, 1e-10));
  }
  return out;
}

}  // namespace erd

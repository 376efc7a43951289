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

// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Usage: acceptance [out_dir]

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "erd/erd.hpp"

using namespace erd;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kSu2Tol = 1e-12;
constexpr double kSmTol = 1e-12;
constexpr double kPulseTol = 1e-12;
constexpr double kSymTol = 1e-10;
constexpr double kSlope = 2.0, kSlopeTol = 0.3;
constexpr double kLeakTol = 1e-10;
constexpr double kBlockTol = 1e-10;
constexpr double kU4Tol = 1e-12, kU4Floor = 0.1;
constexpr double kGateFactor = 10.0;
constexpr double kEulerTol = 1e-8;
constexpr std::size_t kEulerPulses = 24;
constexpr double kTauSm = 1e-6, kTauSmRel = 0.01;
constexpr double kPsdTol = 0.15;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Check runtime_check(const std::string& name, Clock::time_point t0, double limit) {
  return check_below(name + ".runtime_s", seconds_since(t0), limit);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Criteria.

std::vector<Check> c1_su2() {
  const auto t0 = Clock::now();
  const Matrix x = suite::dense_bar(Axis::X), y = suite::dense_bar(Axis::Y),
               z = suite::dense_bar(Axis::Z);
  const cplx i2(0.0, 2.0);
  return {check_below("xy", max_abs(commutator(x, y) - i2 * z), kSu2Tol),
          check_below("yz", max_abs(commutator(y, z) - i2 * x), kSu2Tol),
          check_below("zx", max_abs(commutator(z, x) - i2 * y), kSu2Tol),
          runtime_check("su2", t0, 1.0)};
}

std::vector<Check> c2_sm() {
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  double closed = 0, block = 0, shift = 0;
  for (int t = 0; t < 100; ++t) {
    const double th = ang(rng), pi = ang(rng), pj = ang(rng), c = ang(rng);
    const auto spec = SmGateSpec::pair(th, pi, pj);
    const Matrix u = sm_unitary(spec);
    closed = std::max(closed, max_abs(u - expm_i(to_dense(sm_generator(spec, 2)), -th)));
    const Matrix b = dfs_restrict(u, IonPair{0, 1});
    const Matrix expect = std::cos(th) * Matrix::Identity(2, 2) +
                          cplx(0.0, std::sin(th)) * logical_x_phi_block(pi - pj);
    block = std::max(block, max_abs(b - expect));
    const Matrix bs = dfs_restrict(sm_unitary(SmGateSpec::pair(th, pi + c, pj + c)), IonPair{0, 1});
    shift = std::max(shift, max_abs(bs - b));
  }
  return {check_below("closed_form_vs_expm", closed, kSmTol),
          check_below("dfs_block", block, kSmTol),
          check_below("common_phase_shift", shift, kSmTol)};
}

std::vector<Check> c3_pi() {
  const IonPair p{0, 1};
  const Matrix zz = pauli_string_matrix("ZZ");
  const Matrix pp = named_pulse(PulseLabel::P, p), qq = named_pulse(PulseLabel::Q, p);
  return {check_below("exp(+i pi Xbar)=ZZ", max_abs(logical_rotation(p, Axis::X, M_PI) - zz), kPulseTol),
          check_below("exp(-i pi Xbar)=ZZ", max_abs(logical_rotation(p, Axis::X, -M_PI) - zz), kPulseTol),
          check_below("P*P=PI", max_abs(pp * pp - named_pulse(PulseLabel::Pi, p)), kPulseTol),
          check_below("Q*Q=LAMBDA", max_abs(qq * qq - named_pulse(PulseLabel::Lambda, p)), kPulseTol)};
}

std::vector<Check> c4_pair_sym() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2004);
  std::uniform_real_distribution<double> utau(0.05, 0.5);
  double worst = 0.0, weakest_noncomm = INFINITY;
  for (int t = 0; t < 100; ++t) {
    const Matrix bc = random_hermitian(4, rng), bd = random_hermitian(4, rng);
    weakest_noncomm = std::min(weakest_noncomm, spectral_norm(commutator(bc, bd)));
    const auto bath = DephasingBath::from_col_dif(bc, bd);
    const double tau = utau(rng);
    const Matrix ref =
        expm_i(kron(pauli_string_matrix("ZI") + pauli_string_matrix("IZ"), bc), 2 * tau);
    worst = std::max(worst, max_abs(propagator(symmetrize_pair(tau), {bath.layout(), bath.hamiltonian()}) - ref));
  }
  return {check_below("cycle_vs_collective", worst, kSymTol),
          check_above("baths_noncommuting", weakest_noncomm, 1e-3),
          runtime_check("pair_sym", t0, 10.0)};
}

std::vector<Check> c5_first_order() {
  std::mt19937_64 rng(2005);
  const OpenSystem sys = suite::full_coupling(3, rng, 1.0);
  const double tau0 = 0.02;
  using Fam = PulseSequence (*)(double, IonPair);
  auto slope = [&](Fam f, const std::vector<std::string>& b) {
    return suite::halving_slope(
        [&](double tau) { return suite::offending_phase(f(tau, {0, 1}), sys, b); }, tau0);
  };
  // X-bar part of the four-pulse generator at tau0 and tau0/4.
  auto xbar_gen = [&](double tau) {
    const auto seq = four_pulse_cycle(tau);
    return suite::offending_phase(seq, sys, {"Xbar"}) / seq.cycle_time();
  };
  const double g0 = xbar_gen(tau0), g2 = xbar_gen(tau0 / 4);
  return {check_near("pair_sym{Ybar,Zbar}", slope(symmetrize_pair, {"Ybar", "Zbar"}), kSlope, kSlopeTol),
          check_near("pi_cycle{Leak}", slope(leak_elim_cycle, {"Leak"}), kSlope, kSlopeTol),
          check_near("four_pulse{Leak,Ybar,Zbar}", slope(four_pulse_cycle, {"Leak", "Ybar", "Zbar"}),
                     kSlope, kSlopeTol),
          check_near("ten_pulse{Leak,Xbar,Ybar,Zbar}",
                     slope(ten_pulse_cycle, {"Leak", "Xbar", "Ybar", "Zbar"}), kSlope, kSlopeTol),
          check_near("four_pulse_xbar_generator_ratio", g2 / g0, 1.0, 0.1),
          check_above("four_pulse_xbar_generator", g2, 0.1)};
}

std::vector<Check> c6_leak() {
  std::mt19937_64 rng(2006);
  std::uniform_real_distribution<double> utau(0.05, 0.5);
  double worst = 0.0;
  for (Index d : {2, 3, 4}) {
    for (int t = 0; t < 10; ++t) {
      const Layout lay{2, {d}};
      const Matrix h = to_dense(qubit_motional_error({0, 1}), lay, {{"B", random_hermitian(d, rng)}});
      const Matrix u = propagator(leak_elim_cycle(utau(rng)), {lay, h});
      worst = std::max(worst, max_abs(u - Matrix::Identity(u.rows(), u.cols())));
    }
  }
  return {check_below("cycle_is_identity", worst, kLeakTol)};
}

double block_residual(std::size_t n, Index bd, bool commuting, double tau, std::mt19937_64& rng) {
  const auto bs = commuting ? random_commuting_hermitian(bd, n, rng) : std::vector<Matrix>{};
  OperatorSum h(n);
  BathBindings bind;
  for (std::size_t k = 0; k < n; ++k) {
    const std::string slot = "B" + std::to_string(k);
    bind[slot] = commuting ? bs[k] : random_hermitian(bd, rng);
    h += OperatorSum::site(n, k, Pauli::Z).with_bath(slot);
  }
  const Layout lay{n, {bd}};
  const auto heff = effective_generator(symmetrize_block4(tau, n), {lay, to_dense(h, lay, bind)});
  return spectral_norm(block_collective_residual(heff, n, bd));
}

std::vector<Check> c7_block4() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2007);
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) worst = std::max(worst, block_residual(4, 4, true, 0.2, rng));
  const double n8 = block_residual(8, 2, true, 0.2, rng);
  std::vector<Check> out = {check_below("n4_bath4_residual", worst, kBlockTol),
                            check_below("n8_bath2_residual", n8, kBlockTol),
                            runtime_check("block4", t0, 60.0)};
  return out;
}

// Not gating: generic non-commuting baths leave a residual of order tau^2 phase.
std::string c7_generic_note() {
  std::mt19937_64 rng(2070);
  std::vector<double> taus = {0.1, 0.05, 0.025}, ph;
  for (double tau : taus) {
    std::mt19937_64 r = rng;
    ph.push_back(block_residual(4, 2, false, tau, r) * 4 * tau);
  }
  return "generic non-commuting baths: residual phase " + short_num(ph[0]) + ", " + short_num(ph[1]) +
         ", " + short_num(ph[2]) + " (slope " + short_num(loglog_slope(taus, ph)) + ")";
}

std::vector<Check> c8_u4() {
  std::mt19937_64 rng(2008);
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  const auto reg = DfsRegister::consecutive(2);
  const Matrix sum_z = block_z_sum(4, 0);
  const Matrix z13 = pauli_string_matrix("ZIII") - pauli_string_matrix("IIZI");
  double coll = 0.0, diff = INFINITY;
  for (int t = 0; t < 20; ++t) {
    const Matrix u = u4(u4_spec({ang(rng), ang(rng), ang(rng), ang(rng)}));
    Matrix b = random_hermitian(2, rng);
    b /= spectral_norm(b);
    coll = std::max(coll, code_space_commutator(u, kron(sum_z, b), reg, 2));
    diff = std::min(diff, code_space_commutator(u, kron(z13, b), reg, 2));
  }
  return {check_below("collective_commutator", coll, kU4Tol),
          check_above("differential_commutator", diff, kU4Floor)};
}

std::vector<Check> c9_gates() {
  std::mt19937_64 rng(2009);
  const DfsRegister reg({IonPair{0, 1}}, 2);
  const double omega = 1.0;
  double worst_ratio = 0.0;
  for (Axis axis : {Axis::X, Axis::Y}) {
    for (double angle : {M_PI / 2, M_PI, 2.3}) {
      for (Index d : {2, 3}) {
        const Matrix leak = suite::leak_coupling(d, rng);
        const double t = angle / omega;
        const auto seq = combined_gate(axis, t, omega);
        for (double g : {omega / 1000, omega / 300, omega / 100}) {
          const Matrix u = propagator(seq, {Layout{2, {d}}, g * leak});
          const double inf = 1.0 - code_fidelity(u, logical_target(axis, angle), reg, d);
          worst_ratio = std::max(worst_ratio, inf / (kGateFactor * g * g * t * t));
        }
      }
    }
  }
  double euler = 0.0;
  std::size_t pulses = 0;
  for (int t = 0; t < 100; ++t) {
    const Matrix target = random_su2(rng);
    const auto seq = euler_rotation(euler_angles(target), omega);
    pulses = std::max(pulses, seq.pulse_count());
    euler = std::max(euler, phase_insensitive_distance(
                                dfs_restrict(propagator(seq, OpenSystem::closed(2)), IonPair{0, 1}), target));
  }
  return {check_below("infidelity_over_bound", worst_ratio, 1.0),
          check_below("euler_error", euler, kEulerTol),
          check_below("euler_pulses", double(pulses), double(kEulerPulses))};
}

std::vector<Check> c10_formulas() {
  HardwareParams hw;
  hw.eta = 0.1;
  hw.omega_rabi = 2 * M_PI * 5e6;
  hw.k_int = 1;
  std::vector<Check> out = {check_near("tau_sm", tau_sm(hw), kTauSm, kTauSmRel * kTauSm)};
  double pen = 0.0;
  for (int n : {1, 2, 5}) {
    for (double delta : {3e7, -2e8, 1e9}) {
      HardwareParams h = hw;
      h.n_ions = n;
      h.detuning = delta;
      const double ref = 0.5 * n * (h.omega_rabi / delta) * (h.omega_rabi / delta);
      pen = std::max(pen, std::abs(off_resonant_penalty(h).value - ref) / ref);
    }
  }
  out.push_back(check_below("penalty_rel_error", pen, 1e-15));
  VibBath v;
  v.omega0 = 2 * M_PI * 5e6;
  v.gamma = 1.0;
  v.temperature = kHbar * v.omega0 / (kBoltzmann * std::log(2.0));
  out.push_back(check_near("n_at_ln2", thermal_numbers(v).n_mean, 1.0, 1e-12));
  bool all = true;
  for (int m = 1; m <= 20; ++m)
    for (int kp = 1; kp <= 3; ++kp) all = all && !cancellation_constraints(m, hw, kp).lamb_dicke_compatible;
  out.push_back(check_true("cancellation_incompatible_m1_to_20", all));
  return out;
}

std::vector<Check> c11_noise(const fs::path& out_dir) {
  const auto t0 = Clock::now();
  std::vector<Check> out;
  for (double alpha : {0.0, 1.0, 2.0}) {
    SpectralNoise s;
    s.alpha = alpha;
    s.omega_min = 0.01;
    s.omega_max = 3.0;
    s.amplitude = 1.0;
    s.n_harmonics = 8192;
    s.seed = 11;
    const auto x = sample_1f_trajectory(s, 1e4, 1.0);
    out.push_back(check_near("psd_slope[alpha=" + short_num(alpha) + "]", psd_slope(x, 1.0, 0.03, 1.0),
                             -alpha, kPsdTol));
  }
  {
    SpectralNoise s;
    s.alpha = 1.0;
    s.omega_min = 0.01;
    s.omega_max = 1.0;
    s.amplitude = 5.0;
    s.n_harmonics = 256;
    s.seed = 12;
    DephasingOptions o;
    o.mode = NoiseMode::Collective;
    o.n_traj = 200;
    o.horizon = 100.0;
    double low = 1.0;
    for (const auto& seq : {PulseSequence({Free{0.5}}), symmetrize_pair(0.5)}) {
      const auto r = dephasing_run(seq, s, o);
      for (double c : r.coherence) low = std::min(low, c);
    }
    out.push_back(check_above("dfs_coherence", low, 1.0 - 1e-10));
  }
  const auto sc = parse_config(slurp(fs::path(ERD_SOURCE_DIR) / "configs" / "dt_scan.json"));
  const auto r = run(sc.at(0), {out_dir / "c11", 1});
  for (const auto& c : r.checks) out.push_back(c);
  if (r.partial) out.push_back({"dt_scan.run", NAN, "no error", 0.0, false});
  out.push_back(runtime_check("noise", t0, 300.0));
  return out;
}

std::vector<Check> c12_repro(const fs::path& out_dir) {
  const auto text = R"([
    {"name": "verify", "kind": "verify-algebra", "seed": 3, "parameters": {"trials": 5}},
    {"name": "storage", "kind": "storage-sim", "seed": 4,
     "parameters": {"dt": 5e-5, "n_traj": 24, "n_harmonics": 128, "max_horizon": 8e-3}},
    {"name": "gate", "kind": "gate-sim", "seed": 5},
    {"name": "block", "kind": "block4-sim", "seed": 6, "parameters": {"bath": "generic", "bath_dim": 2}},
    {"name": "scan", "kind": "dt-scan", "seed": 7, "output_path": "scan/scan.json",
     "parameters": {"n_traj": 24, "n_harmonics": 512,
                    "dt_grid": [31.41592653589793, 22.21441469079183, 15.707963267948966, 11.107207345395915]}}
  ])";
  const auto scenarios = parse_config(text);
  std::vector<Check> out;
  const fs::path dirs[] = {out_dir / "c12_jobs1", out_dir / "c12_jobs3", out_dir / "c12_jobs1_again"};
  const unsigned jobs[] = {1, 3, 1};
  std::vector<std::vector<std::string>> arts(3);
  for (int k = 0; k < 3; ++k) {
    fs::remove_all(dirs[k]);
    for (const auto& s : scenarios) {
      const auto r = run(s, {dirs[k], jobs[k]});
      for (const auto& a : r.artifacts) arts[k].push_back(fs::relative(a, dirs[k]).generic_string());
    }
  }
  for (const auto& rel : arts[0]) {
    const std::string a = slurp(dirs[0] / rel);
    const bool same = !a.empty() && a == slurp(dirs[1] / rel) && a == slurp(dirs[2] / rel);
    out.push_back(check_true("identical:" + rel, same));
  }
  out.push_back(check_true("artifact_sets_match", arts[0] == arts[1] && arts[0] == arts[2]));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out_dir = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::create_directories(out_dir);
  struct Criterion {
    std::string name;
    std::function<std::vector<Check>()> body;
    std::function<std::string()> note;
  };
  const std::vector<Criterion> criteria = {
      {"C01 su2_algebra", c1_su2, {}},
      {"C02 sm_closed_form", c2_sm, {}},
      {"C03 pi_identity", c3_pi, {}},
      {"C04 pair_symmetrization_exact", c4_pair_sym, {}},
      {"C05 first_order_suppression", c5_first_order, {}},
      {"C06 motional_leak_elimination", c6_leak, {}},
      {"C07 block4_collective", c7_block4, c7_generic_note},
      {"C08 u4_commutation", c8_u4, {}},
      {"C09 combined_gates", c9_gates, {}},
      {"C10 scalar_formulas", c10_formulas, {}},
      {"C11 noise_machinery", [&] { return c11_noise(out_dir); }, {}},
      {"C12 reproducibility", [&] { return c12_repro(out_dir); }, {}},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::vector<Check> checks;
    std::string error;
    const auto t0 = Clock::now();
    try {
      checks = c.body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const bool pass = error.empty() && !checks.empty() &&
                      std::all_of(checks.begin(), checks.end(), [](const Check& k) { return k.pass; });
    if (!pass) ++failed;
    std::printf("%s  %s  (%.2fs)\n", pass ? "PASS" : "FAIL", c.name.c_str(), seconds_since(t0));
    for (const auto& k : checks) std::printf("      %s\n", check_line(k).c_str());
    if (!error.empty()) std::printf("      error: %s\n", error.c_str());
    if (c.note) std::printf("      note: %s\n", c.note().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

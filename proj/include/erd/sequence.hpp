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
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "erd/dense.hpp"
#include "erd/dfs.hpp"
#include "erd/errors.hpp"
#include "erd/pauli.hpp"
#include "erd/sm_gates.hpp"

namespace erd {

/// Named decoupling pulses on one pair:
///   P = exp(-i pi/2 Xbar), Pd = P^dagger, PI = exp(i pi Xbar) = ZZ,
///   Q = exp(-i pi/2 Ybar), Qd = Q^dagger, LAMBDA = exp(i pi Ybar).
enum class PulseLabel { P, Pdag, Pi, Q, Qdag, Lambda };

inline std::string label_name(PulseLabel l) {
  switch (l) {
    case PulseLabel::P:
      return "P";
    case PulseLabel::Pdag:
      return "Pd";
    case PulseLabel::Pi:
      return "PI";
    case PulseLabel::Q:
      return "Q";
    case PulseLabel::Qdag:
      return "Qd";
    case PulseLabel::Lambda:
      return "LAMBDA";
  }
  return "?";
}

inline PulseLabel parse_label(std::string_view s) {
  if (s == "P") return PulseLabel::P;
  if (s == "Pd") return PulseLabel::Pdag;
  if (s == "PI") return PulseLabel::Pi;
  if (s == "Q") return PulseLabel::Q;
  if (s == "Qd") return PulseLabel::Qdag;
  if (s == "LAMBDA") return PulseLabel::Lambda;
  throw DomainError("unknown pulse label '" + std::string(s) + "'");
}

inline Matrix named_pulse(PulseLabel l, const IonPair& p, std::size_t width = 2) {
  switch (l) {
    case PulseLabel::P:
      return logical_rotation(p, Axis::X, -M_PI / 2, width);
    case PulseLabel::Pdag:
      return logical_rotation(p, Axis::X, M_PI / 2, width);
    case PulseLabel::Pi:
      return logical_rotation(p, Axis::X, M_PI, width);
    case PulseLabel::Q:
      return logical_rotation(p, Axis::Y, -M_PI / 2, width);
    case PulseLabel::Qdag:
      return logical_rotation(p, Axis::Y, M_PI / 2, width);
    case PulseLabel::Lambda:
      return logical_rotation(p, Axis::Y, M_PI, width);
  }
  throw DomainError("named_pulse: bad label");
}

inline Matrix named_pulse(std::string_view label, const IonPair& p,
                          std::size_t width = 2) {
  return named_pulse(parse_label(label), p, width);
}

// Events. Sequences list events in written order; the rightmost event acts
// first.

struct Free {
  double tau = 0.0;
};

struct LabeledFactor {
  PulseLabel label;
  IonPair pair;
};

struct CustomUnitary {
  std::string name;
  Matrix u;  ///< acts on the qubit register only
};

/// Instantaneous pulse. Labeled factors address disjoint pairs and are
/// applied simultaneously.
struct Pulse {
  std::variant<std::vector<LabeledFactor>, SmGateSpec, CustomUnitary> what;
};

/// Continuous drive amplitude * hamiltonian for time tau, on top of the
/// system-bath Hamiltonian.
struct Drive {
  OperatorSum hamiltonian;
  double tau = 0.0;
  double amplitude = 1.0;
};

using PulseEvent = std::variant<Free, Pulse, Drive>;

inline Pulse labeled(PulseLabel l, IonPair p = {0, 1}) {
  return Pulse{std::vector<LabeledFactor>{{l, p}}};
}

class PulseSequence {
 public:
  PulseSequence() = default;
  explicit PulseSequence(std::vector<PulseEvent> events)
      : events_(std::move(events)) {
    for (const auto& e : events_) {
      if (const auto* f = std::get_if<Free>(&e); f && !(f->tau >= 0.0))
        throw DomainError("free interval must be >= 0");
      if (const auto* d = std::get_if<Drive>(&e); d && !(d->tau >= 0.0))
        throw DomainError("drive duration must be >= 0");
    }
  }

  const std::vector<PulseEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

  /// Total duration of free and driven intervals.
  double cycle_time() const {
    double t = 0.0;
    for (const auto& e : events_) {
      if (const auto* f = std::get_if<Free>(&e)) t += f->tau;
      if (const auto* d = std::get_if<Drive>(&e)) t += d->tau;
    }
    return t;
  }

  /// Control operations: instantaneous pulses plus drive segments.
  std::size_t pulse_count() const {
    std::size_t n = 0;
    for (const auto& e : events_)
      if (!std::holds_alternative<Free>(e)) ++n;
    return n;
  }

  std::size_t instant_pulse_count() const {
    std::size_t n = 0;
    for (const auto& e : events_)
      if (std::holds_alternative<Pulse>(e)) ++n;
    return n;
  }

  /// [a, b]: b acts first.
  friend PulseSequence operator+(const PulseSequence& a, const PulseSequence& b) {
    std::vector<PulseEvent> ev = a.events_;
    ev.insert(ev.end(), b.events_.begin(), b.events_.end());
    return PulseSequence(std::move(ev));
  }

  std::string str() const;
  static PulseSequence parse(std::string_view text);

 private:
  std::vector<PulseEvent> events_;
};

namespace detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline double parse_num(std::string_view s) {
  s = trim(s);
  const std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size())
    throw DomainError("bad number '" + buf + "'");
  return v;
}

inline std::size_t parse_index(std::string_view s) {
  const double v = parse_num(s);
  if (v < 0 || v != std::floor(v)) throw DomainError("bad index");
  return static_cast<std::size_t>(v);
}

/// Splits on `sep` outside parentheses.
inline std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth < 0) throw DomainError("unbalanced parentheses");
    if (s[i] == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw DomainError("unbalanced parentheses");
  out.push_back(trim(s.substr(start)));
  return out;
}

inline std::string opsum_text(const OperatorSum& h) {
  std::string s;
  for (const auto& t : h.terms()) {
    if (!s.empty()) s += " ";
    s += "(" + num(t.coefficient.real()) + "," + num(t.coefficient.imag()) +
         ")" + t.factors;
    for (const auto& b : t.bath) s += "@" + b;
  }
  return s;
}

inline OperatorSum parse_opsum(std::string_view s) {
  s = trim(s);
  std::vector<PauliTerm> terms;
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] == ' ') {
      ++pos;
      continue;
    }
    if (s[pos] != '(') throw DomainError("operator term must start with '('");
    const auto close = s.find(')', pos);
    if (close == std::string_view::npos) throw DomainError("unterminated term");
    const auto parts = split_top(s.substr(pos + 1, close - pos - 1), ',');
    if (parts.size() != 2) throw DomainError("coefficient needs (re,im)");
    auto end = s.find(' ', close);
    if (end == std::string_view::npos) end = s.size();
    const auto body = s.substr(close + 1, end - close - 1);
    const auto fields = split_top(body, '@');
    BathWord bath(fields.begin() + 1, fields.end());
    terms.emplace_back(std::string(fields.front()),
                       cplx(parse_num(parts[0]), parse_num(parts[1])),
                       BathWord(bath.begin(), bath.end()));
    pos = end;
  }
  if (terms.empty()) throw DomainError("empty operator");
  OperatorSum h(terms.front().width());
  for (const auto& t : terms) h.add(t);
  return h;
}

}  // namespace detail

inline std::string PulseSequence::str() const {
  std::string s = "[";
  bool first = true;
  for (const auto& e : events_) {
    if (!first) s += ", ";
    first = false;
    if (const auto* f = std::get_if<Free>(&e)) {
      s += "tau=" + detail::num(f->tau);
    } else if (const auto* d = std::get_if<Drive>(&e)) {
      s += "DRIVE(" + detail::num(d->tau) + "," + detail::num(d->amplitude) +
           ";" + detail::opsum_text(d->hamiltonian) + ")";
    } else {
      const auto& p = std::get<Pulse>(e);
      if (const auto* fs = std::get_if<std::vector<LabeledFactor>>(&p.what)) {
        bool f1 = true;
        for (const auto& lf : *fs) {
          if (!f1) s += "*";
          f1 = false;
          s += label_name(lf.label) + "(" + std::to_string(lf.pair.first) +
               "," + std::to_string(lf.pair.second) + ")";
        }
      } else if (const auto* g = std::get_if<SmGateSpec>(&p.what)) {
        s += "SM(" + detail::num(g->theta);
        for (double ph : g->phi) s += "," + detail::num(ph);
        s += ";";
        for (std::size_t k = 0; k < g->ions.size(); ++k)
          s += (k ? "," : "") + std::to_string(g->ions[k]);
        s += ")";
      } else {
        s += "CUSTOM(" + std::get<CustomUnitary>(p.what).name + ")";
      }
    }
  }
  return s + "]";
}

/**
 * Grammar (whitespace-insensitive around separators):
 *   sequence := '[' [event {',' event}] ']'
 *   event    := 'tau=' NUM
 *             | factor {'*' factor}
 *             | 'SM(' NUM {',' NUM} ';' INT {',' INT} ')'
 *             | 'DRIVE(' NUM ',' NUM ';' term {' ' term} ')'
 *   factor   := LABEL ['(' INT ',' INT ')']      LABEL in P Pd PI Q Qd LAMBDA
 *   term     := '(' NUM ',' NUM ')' PAULIS {'@' NAME}
 * A bare LABEL addresses pair (0,1).
 */
inline PulseSequence PulseSequence::parse(std::string_view text) {
  using namespace detail;
  auto s = trim(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw DomainError("sequence must be enclosed in [ ]");
  s = trim(s.substr(1, s.size() - 2));
  std::vector<PulseEvent> events;
  if (s.empty()) return PulseSequence{};
  for (auto item : split_top(s, ',')) {
    if (item.empty()) throw DomainError("empty event");
    if (item.starts_with("tau=")) {
      events.emplace_back(Free{parse_num(item.substr(4))});
    } else if (item.starts_with("DRIVE(") && item.back() == ')') {
      const auto inner = item.substr(6, item.size() - 7);
      const auto semi = inner.find(';');
      if (semi == std::string_view::npos) throw DomainError("DRIVE needs ';'");
      const auto head = split_top(inner.substr(0, semi), ',');
      if (head.size() != 2) throw DomainError("DRIVE needs tau,amplitude");
      events.emplace_back(Drive{parse_opsum(inner.substr(semi + 1)),
                                parse_num(head[0]), parse_num(head[1])});
    } else if (item.starts_with("SM(") && item.back() == ')') {
      const auto inner = item.substr(3, item.size() - 4);
      const auto semi = inner.find(';');
      if (semi == std::string_view::npos) throw DomainError("SM needs ';'");
      const auto nums = split_top(inner.substr(0, semi), ',');
      const auto ions = split_top(inner.substr(semi + 1), ',');
      std::vector<double> phi;
      for (std::size_t k = 1; k < nums.size(); ++k) phi.push_back(parse_num(nums[k]));
      std::vector<std::size_t> io;
      for (auto i : ions) io.push_back(parse_index(i));
      events.emplace_back(Pulse{SmGateSpec(parse_num(nums.at(0)), phi, io)});
    } else if (item.starts_with("CUSTOM(")) {
      throw DomainError("custom pulses carry a matrix and cannot be parsed");
    } else {
      std::vector<LabeledFactor> fs;
      for (auto f : split_top(item, '*')) {
        const auto open = f.find('(');
        if (open == std::string_view::npos) {
          fs.push_back({parse_label(f), IonPair{0, 1}});
          continue;
        }
        if (f.back() != ')') throw DomainError("bad pulse factor");
        const auto idx = split_top(f.substr(open + 1, f.size() - open - 2), ',');
        if (idx.size() != 2) throw DomainError("pulse pair needs two indices");
        fs.push_back({parse_label(trim(f.substr(0, open))),
                      IonPair{parse_index(idx[0]), parse_index(idx[1])}});
      }
      events.emplace_back(Pulse{std::move(fs)});
    }
  }
  return PulseSequence(std::move(events));
}

/// Joint Hamiltonian H_SB + H_B on (register (x) bath), held fixed over a
/// sequence.
struct OpenSystem {
  Layout layout;
  Matrix h;

  static OpenSystem closed(std::size_t qubits) {
    const Layout l{qubits, {}};
    return {l, Matrix::Zero(l.dim(), l.dim())};
  }
};

/// Register-only unitary of an instantaneous pulse.
inline Matrix pulse_unitary(const Pulse& p, std::size_t qubits) {
  const Index n = Index{1} << qubits;
  if (const auto* fs = std::get_if<std::vector<LabeledFactor>>(&p.what)) {
    Matrix u = Matrix::Identity(n, n);
    std::vector<bool> used(qubits, false);
    for (const auto& f : *fs) {
      check_pair(f.pair, qubits);
      if (used[f.pair.first] || used[f.pair.second])
        throw DomainError("simultaneous pulse factors overlap");
      used[f.pair.first] = used[f.pair.second] = true;
      u = u * named_pulse(f.label, f.pair, qubits);
    }
    return u;
  }
  if (const auto* g = std::get_if<SmGateSpec>(&p.what)) {
    return g->ions.size() == 2 ? sm_unitary(*g, qubits) : u4(*g, qubits);
  }
  const auto& c = std::get<CustomUnitary>(p.what);
  if (c.u.rows() != n || c.u.cols() != n)
    throw DimensionError("custom pulse '" + c.name + "' has wrong dimension");
  if (!is_unitary(c.u))
    throw DomainError("custom pulse '" + c.name + "' is not unitary");
  return c.u;
}

/**
 * Ordered product of segment propagators and pulse unitaries, pulses taken
 * as instantaneous. Written order: the first event is the leftmost factor.
 */
inline Matrix propagator(const PulseSequence& seq, const OpenSystem& sys) {
  const Index n = sys.layout.dim();
  if (sys.h.rows() != n || sys.h.cols() != n)
    throw DimensionError("propagator: Hamiltonian dimension " +
                         std::to_string(sys.h.rows()) + " vs layout " +
                         std::to_string(n));
  const Index db = sys.layout.bath_dim();
  const Matrix id_bath = Matrix::Identity(db, db);
  std::optional<HermitianPropagator> free;
  struct CachedDrive {
    OperatorSum h;
    double amplitude;
    HermitianPropagator prop;
  };
  std::vector<CachedDrive> drives;

  Matrix u = Matrix::Identity(n, n);
  for (const auto& e : seq.events()) {
    if (const auto* f = std::get_if<Free>(&e)) {
      if (f->tau == 0.0) continue;
      if (!free) free.emplace(sys.h);
      u = u * (*free)(f->tau);
    } else if (const auto* d = std::get_if<Drive>(&e)) {
      if (d->hamiltonian.width() != sys.layout.qubits)
        throw DimensionError("drive Hamiltonian width mismatch");
      const CachedDrive* hit = nullptr;
      for (const auto& c : drives)
        if (c.amplitude == d->amplitude && c.h == d->hamiltonian) hit = &c;
      if (!hit) {
        const Matrix hs = kron(to_dense(d->hamiltonian), id_bath);
        drives.push_back({d->hamiltonian, d->amplitude,
                          HermitianPropagator(sys.h + d->amplitude * hs)});
        hit = &drives.back();
      }
      u = u * hit->prop(d->tau);
    } else {
      const Matrix p = pulse_unitary(std::get<Pulse>(e), sys.layout.qubits);
      u = u * (db == 1 ? p : kron(p, id_bath));
    }
  }
  return u;
}

// Sequence builders.

/// [tau, R, tau, R^dagger]: propagator U R U R^dagger.
inline PulseSequence parity_kick(const Matrix& r, double tau,
                                 const std::string& name = "R") {
  if (!is_unitary(r)) throw DomainError("parity_kick: R is not unitary");
  return PulseSequence({Free{tau}, Pulse{CustomUnitary{name, r}}, Free{tau},
                        Pulse{CustomUnitary{name + "^dagger", r.adjoint()}}});
}

/// [tau, P, tau, Pd]: turns pair dephasing into collective dephasing.
inline PulseSequence symmetrize_pair(double tau, IonPair p = {0, 1}) {
  return PulseSequence({Free{tau}, labeled(PulseLabel::P, p), Free{tau},
                        labeled(PulseLabel::Pdag, p)});
}

/**
 * Two-stage symmetrisation of N ions into 4-ion blocks. Stage 1 pulses every
 * pair (4k, 4k+1), (4k+2, 4k+3); stage 2 pulses (4k, 4k+2), (4k+1, 4k+3)
 * inside each block, wrapping stage 1 as its free evolution.
 */
inline PulseSequence symmetrize_block4(double tau, std::size_t n_ions) {
  if (n_ions == 0 || n_ions % 4 != 0)
    throw DomainError("symmetrize_block4: N must be a positive multiple of 4");
  auto layer = [&](PulseLabel l, bool nnn) {
    std::vector<LabeledFactor> fs;
    for (std::size_t b = 0; b < n_ions; b += 4) {
      if (nnn) {
        fs.push_back({l, {b, b + 2}});
        fs.push_back({l, {b + 1, b + 3}});
      } else {
        fs.push_back({l, {b, b + 1}});
        fs.push_back({l, {b + 2, b + 3}});
      }
    }
    return Pulse{std::move(fs)};
  };
  const PulseSequence stage1({Free{tau}, layer(PulseLabel::P, false), Free{tau},
                              layer(PulseLabel::Pdag, false)});
  return stage1 + PulseSequence({layer(PulseLabel::P, true)}) + stage1 +
         PulseSequence({layer(PulseLabel::Pdag, true)});
}

/// [tau, PI, tau, PI]: removes every leakage term at first order.
inline PulseSequence leak_elim_cycle(double tau, IonPair p = {0, 1}) {
  return PulseSequence({Free{tau}, labeled(PulseLabel::Pi, p), Free{tau},
                        labeled(PulseLabel::Pi, p)});
}

/// [tau, PI, tau, P, tau, PI, tau, Pd]: keeps the DFS part and Xbar only.
inline PulseSequence four_pulse_cycle(double tau, IonPair p = {0, 1}) {
  return PulseSequence({Free{tau}, labeled(PulseLabel::Pi, p), Free{tau},
                        labeled(PulseLabel::P, p), Free{tau},
                        labeled(PulseLabel::Pi, p), Free{tau},
                        labeled(PulseLabel::Pdag, p)});
}

/// Four-pulse cycle, Qd, four-pulse cycle, Q: keeps only the DFS part.
inline PulseSequence ten_pulse_cycle(double tau, IonPair p = {0, 1}) {
  const auto four = four_pulse_cycle(tau, p);
  return four + PulseSequence({labeled(PulseLabel::Qdag, p)}) + four +
         PulseSequence({labeled(PulseLabel::Q, p)});
}

/**
 * Drive Hamiltonian of a logical rotation: X_phi X_phi restricts to Xbar and
 * X_(phi+pi/2) X_phi to Ybar on the code subspace.
 */
inline OperatorSum drive_hamiltonian(Axis axis, IonPair p, std::size_t width,
                                     double phi = 0.0) {
  switch (axis) {
    case Axis::X:
      return sm_generator(SmGateSpec::pair(0.0, phi, phi, p), width);
    case Axis::Y:
      return sm_generator(SmGateSpec::pair(0.0, phi + M_PI / 2, phi, p), width);
    case Axis::Z:
      break;
  }
  throw DomainError("no direct drive for the Z axis; use euler_rotation");
}

/**
 * Logical rotation exp(-i omega t A) interleaved with decoupling pulses that
 * commute with the drive: X uses PI and P, Y uses LAMBDA and Q. Four drive
 * segments of t/4 plus four pulses.
 */
inline PulseSequence combined_gate(Axis axis, double t, double omega,
                                   IonPair p = {0, 1}, std::size_t width = 2,
                                   double phi = 0.0) {
  if (!(t > 0.0)) throw DomainError("combined_gate: t must be positive");
  const OperatorSum hs = drive_hamiltonian(axis, p, width, phi);
  const Drive seg{hs, t / 4, omega};
  const bool x = axis == Axis::X;
  const auto flip = labeled(x ? PulseLabel::Pi : PulseLabel::Lambda, p);
  const auto half = labeled(x ? PulseLabel::P : PulseLabel::Q, p);
  const auto half_dag = labeled(x ? PulseLabel::Pdag : PulseLabel::Qdag, p);
  return PulseSequence({seg, flip, seg, half, seg, flip, seg, half_dag});
}

struct EulerAngles {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

/**
 * Angles with u = phase * exp(-i alpha Xbar) exp(-i beta Ybar)
 * exp(-i gamma Xbar), u given as a 2x2 block in the code basis.
 */
inline EulerAngles euler_angles(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2 || !is_unitary(u, 1e-8))
    throw DomainError("euler_angles: need a 2x2 unitary");
  const Matrix xs = logical_x_phi_block(0.0);
  const Matrix ys = logical_x_phi_block(M_PI / 2);
  const Matrix zs = cplx(0.0, -0.5) * (xs * ys - ys * xs);
  const Matrix su = u / std::sqrt(u.determinant());
  // su = w I - i (x Xbar + y Ybar + z Zbar)
  const double w = 0.5 * su.trace().real();
  const double x = (cplx(0.0, 0.5) * (xs * su).trace()).real();
  const double y = (cplx(0.0, 0.5) * (ys * su).trace()).real();
  const double z = (cplx(0.0, 0.5) * (zs * su).trace()).real();
  const double beta = std::atan2(std::hypot(y, z), std::hypot(w, x));
  const double sum = std::atan2(x, w);
  const double diff = std::atan2(z, y);
  return {0.5 * (sum + diff), beta, 0.5 * (sum - diff)};
}

/// Euler X-Y-X synthesis from combined gates; zero angles are elided.
inline PulseSequence euler_rotation(const EulerAngles& a, double omega,
                                    IonPair p = {0, 1}, std::size_t width = 2) {
  if (!(omega > 0.0)) throw DomainError("euler_rotation: omega must be positive");
  PulseSequence seq;
  auto factor = [&](Axis axis, double angle) {
    if (angle == 0.0) return;
    seq = seq + combined_gate(axis, std::abs(angle) / omega,
                              angle > 0 ? omega : -omega, p, width);
  };
  factor(Axis::X, a.alpha);
  factor(Axis::Y, a.beta);
  factor(Axis::X, a.gamma);
  return seq;
}

}  // namespace erd

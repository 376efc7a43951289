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

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "erd/errors.hpp"

namespace erd {

using cplx = std::complex<double>;

/** Single-site Pauli label. The character form is one of "IXYZ". */
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I':
      return Pauli::I;
    case 'X':
      return Pauli::X;
    case 'Y':
      return Pauli::Y;
    case 'Z':
      return Pauli::Z;
    default:
      throw DomainError(std::string("not a Pauli label: '") + c + "'");
  }
}

/// Product of two single-site Paulis: a*b = phase * result.
struct SiteProduct {
  Pauli result;
  cplx phase;
};

inline SiteProduct site_mul(Pauli a, Pauli b) {
  if (a == Pauli::I) return {b, 1.0};
  if (b == Pauli::I) return {a, 1.0};
  if (a == b) return {Pauli::I, 1.0};
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  // X*Y = iZ, Y*Z = iX, Z*X = iY; reversed order flips the sign.
  const auto c = static_cast<Pauli>(6 - ia - ib);
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {c, cyclic ? cplx(0.0, 1.0) : cplx(0.0, -1.0)};
}

/// Ordered product of named bath operators; the empty word is the bath
/// identity. The leftmost name is the leftmost matrix factor.
using BathWord = std::vector<std::string>;

/**
 * A Pauli string on a fixed number of qubit slots, with a complex weight and
 * an optional product of abstract bath operators attached.
 */
struct PauliTerm {
  std::string factors;
  cplx coefficient{1.0, 0.0};
  BathWord bath;

  PauliTerm() = default;
  explicit PauliTerm(std::string f, cplx c = 1.0, BathWord b = {})
      : factors(std::move(f)), coefficient(c), bath(std::move(b)) {
    for (char ch : factors) pauli_from_char(ch);
  }

  std::size_t width() const { return factors.size(); }
  Pauli at(std::size_t site) const { return pauli_from_char(factors.at(site)); }
};

inline PauliTerm pauli_mul(const PauliTerm& a, const PauliTerm& b) {
  if (a.width() != b.width())
    throw DimensionError("pauli_mul: width " + std::to_string(a.width()) +
                         " vs " + std::to_string(b.width()));
  PauliTerm out;
  out.factors.resize(a.width());
  cplx phase = a.coefficient * b.coefficient;
  for (std::size_t k = 0; k < a.width(); ++k) {
    const SiteProduct sp = site_mul(a.at(k), b.at(k));
    out.factors[k] = to_char(sp.result);
    phase *= sp.phase;
  }
  out.coefficient = phase;
  out.bath = a.bath;
  out.bath.insert(out.bath.end(), b.bath.begin(), b.bath.end());
  return out;
}

/// Whether the Pauli-string parts commute. Attached bath words are ignored.
inline bool commutes(const PauliTerm& a, const PauliTerm& b) {
  if (a.width() != b.width())
    throw DimensionError("commutes: width " + std::to_string(a.width()) +
                         " vs " + std::to_string(b.width()));
  int clashes = 0;
  for (std::size_t k = 0; k < a.width(); ++k) {
    const char x = a.factors[k];
    const char y = b.factors[k];
    if (x != 'I' && y != 'I' && x != y) ++clashes;
  }
  return clashes % 2 == 0;
}

/**
 * Weighted sum of PauliTerms in canonical form: one entry per
 * (factors, bath word) key, keys ordered lexicographically, exact zeros
 * dropped.
 */
class OperatorSum {
 public:
  using Key = std::pair<std::string, BathWord>;

  explicit OperatorSum(std::size_t width = 0) : width_(width) {}
  OperatorSum(const PauliTerm& t) : width_(t.width()) { add(t); }  // NOLINT

  /// Single term from a Pauli string such as "XZ".
  static OperatorSum term(std::string_view factors, cplx c = 1.0,
                          BathWord bath = {}) {
    return OperatorSum(PauliTerm(std::string(factors), c, std::move(bath)));
  }

  static OperatorSum identity(std::size_t width, cplx c = 1.0) {
    return term(std::string(width, 'I'), c);
  }

  /// Single-site operator p on `site` of a `width`-qubit register.
  static OperatorSum site(std::size_t width, std::size_t site, Pauli p,
                          cplx c = 1.0) {
    if (site >= width) throw DomainError("site index out of range");
    std::string f(width, 'I');
    f[site] = to_char(p);
    return term(f, c);
  }

  /// Two-site operator p on `i` and q on `j`.
  static OperatorSum sites(std::size_t width, std::size_t i, Pauli p,
                           std::size_t j, Pauli q, cplx c = 1.0) {
    if (i >= width || j >= width || i == j)
      throw DomainError("site indices out of range or equal");
    std::string f(width, 'I');
    f[i] = to_char(p);
    f[j] = to_char(q);
    return term(f, c);
  }

  std::size_t width() const { return width_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add(const PauliTerm& t) {
    if (t.width() != width_)
      throw DimensionError("OperatorSum::add: width " +
                           std::to_string(t.width()) + " vs " +
                           std::to_string(width_));
    if (t.coefficient == cplx(0.0)) return;
    auto [it, inserted] =
        terms_.try_emplace(Key{t.factors, t.bath}, t.coefficient);
    if (!inserted) {
      it->second += t.coefficient;
      if (it->second == cplx(0.0)) terms_.erase(it);
    }
  }

  cplx coefficient(const std::string& factors, const BathWord& bath = {}) const {
    auto it = terms_.find(Key{factors, bath});
    return it == terms_.end() ? cplx(0.0) : it->second;
  }

  std::vector<PauliTerm> terms() const {
    std::vector<PauliTerm> out;
    out.reserve(terms_.size());
    for (const auto& [k, c] : terms_) out.emplace_back(k.first, c, k.second);
    return out;
  }

  const std::map<Key, cplx>& raw() const { return terms_; }

  /// Appends `slot` to the bath word of every term (tensoring with a bath
  /// operator from the right).
  OperatorSum with_bath(const std::string& slot) const {
    OperatorSum out(width_);
    for (auto t : terms()) {
      t.bath.push_back(slot);
      out.add(t);
    }
    return out;
  }

  OperatorSum dagger() const {
    OperatorSum out(width_);
    for (auto t : terms()) {
      t.coefficient = std::conj(t.coefficient);
      std::reverse(t.bath.begin(), t.bath.end());
      out.add(t);
    }
    return out;
  }

  /// Drops terms with |coefficient| <= tol.
  OperatorSum pruned(double tol) const {
    OperatorSum out(width_);
    for (const auto& t : terms())
      if (std::abs(t.coefficient) > tol) out.add(t);
    return out;
  }

  /// Largest coefficient magnitude; 0 for the empty sum.
  double max_abs() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  OperatorSum& operator+=(const OperatorSum& o) {
    check_width(o);
    for (const auto& t : o.terms()) add(t);
    return *this;
  }
  OperatorSum& operator-=(const OperatorSum& o) { return *this += o * -1.0; }
  OperatorSum& operator*=(cplx s) {
    if (s == cplx(0.0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) {
    return a += b;
  }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) {
    return a -= b;
  }
  friend OperatorSum operator*(OperatorSum a, cplx s) { return a *= s; }
  friend OperatorSum operator*(cplx s, OperatorSum a) { return a *= s; }
  friend OperatorSum operator*(OperatorSum a, double s) { return a *= s; }
  friend OperatorSum operator*(double s, OperatorSum a) { return a *= s; }

  friend OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
    a.check_width(b);
    OperatorSum out(a.width_);
    for (const auto& x : a.terms())
      for (const auto& y : b.terms()) out.add(pauli_mul(x, y));
    return out;
  }

  friend bool operator==(const OperatorSum& a, const OperatorSum& b) {
    return a.width_ == b.width_ && a.terms_ == b.terms_;
  }

  /// Human-readable form, e.g. "(0.5,0)*XX + (0.5,0)*YY@B".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& t : terms()) {
      if (!s.empty()) s += " + ";
      s += "(" + fmt_num(t.coefficient.real()) + "," +
           fmt_num(t.coefficient.imag()) + ")*" + t.factors;
      for (const auto& b : t.bath) s += "@" + b;
    }
    return s;
  }

 private:
  void check_width(const OperatorSum& o) const {
    if (o.width_ != width_)
      throw DimensionError("OperatorSum width " + std::to_string(width_) +
                           " vs " + std::to_string(o.width_));
  }
  static std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  std::size_t width_;
  std::map<Key, cplx> terms_;
};

inline OperatorSum commutator(const OperatorSum& a, const OperatorSum& b) {
  return a * b - b * a;
}

inline OperatorSum anticommutator(const OperatorSum& a, const OperatorSum& b) {
  return a * b + b * a;
}

/// Canonical-form equality up to an absolute coefficient tolerance.
inline bool approx_equal(const OperatorSum& a, const OperatorSum& b,
                         double tol) {
  if (a.width() != b.width()) return false;
  return (a - b).max_abs() <= tol;
}

/// Hermiticity assuming every named bath operator is itself Hermitian.
inline bool is_hermitian(const OperatorSum& a, double tol = 1e-10) {
  return approx_equal(a, a.dagger(), tol);
}

}  // namespace erd

// Copyright 2026 the rebit-wigner authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REBIT_PAULI_HPP
#define REBIT_PAULI_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "rebit/gf2.hpp"

namespace rebit {

/// Sign-tracked real translation operator sign * T_a with T_a = Z(a_Z) X(a_X).
/// Every T_a is a real matrix in this ordering, and products of two of them
/// only ever pick up a factor of (-1)^{a_X . b_Z}, never i, so the sign group
/// {+1, -1} is closed under the algebra used here.
struct PauliOp {
  PhasePoint point;
  int sign = +1;

  PauliOp() = default;
  PauliOp(PhasePoint p, int s) : point(p), sign(s) {
    if (s != 1 && s != -1) throw std::invalid_argument("PauliOp: sign must be +1 or -1");
  }

  int n() const { return point.n; }
  bool operator==(const PauliOp& o) const = default;
};

/// a in A: the label of a symmetric (hence observable) operator.
inline bool in_set_A(const PhasePoint& a) { return parity64(a.z & a.x) == 0; }

/// a in O: directly measurable labels, pure X-type or pure Z-type.
inline bool in_set_O(const PhasePoint& a) { return a.z == 0 || a.x == 0; }

inline bool commutes(const PauliOp& p, const PauliOp& q) {
  return sym_inner(p.point, q.point) == 0;
}

inline PauliOp pauli_product(const PauliOp& p, const PauliOp& q) {
  if (p.n() != q.n()) throw std::invalid_argument("pauli_product: size mismatch");
  int sign = p.sign * q.sign;
  if (parity64(p.point.x & q.point.z)) sign = -sign;
  return PauliOp(p.point + q.point, sign);
}

inline PauliOp pauli_adjoint(const PauliOp& p) {
  int sign = p.sign;
  if (parity64(p.point.z & p.point.x)) sign = -sign;
  return PauliOp(p.point, sign);
}

using ObservableSet = std::vector<PauliOp>;

/// Lemma-style joint measurability: all pairs commute and additionally every
/// ordered pair satisfies (a_X, b_Z) = 0, so products compose without signs.
inline bool is_jointly_measurable(const ObservableSet& m) {
  for (const auto& p : m)
    if (!in_set_A(p.point)) throw std::invalid_argument("is_jointly_measurable: label not in A");
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m.size(); ++j) {
      if (i == j) continue;
      if (parity64(m[i].point.x & m[j].point.z)) return false;
    }
  return true;
}

/// Parse "+XZ", "-IZX", "+iY", ... Letters run over rebits 1..n left to right.
/// The phase is tracked as a power of i; a string with an odd number of Y
/// letters needs a leading i to denote a real operator, since Y itself is
/// imaginary while Z(a_Z)X(a_X) is real.
inline PauliOp parse_pauli(const std::string& s) {
  size_t pos = 0;
  int sign = +1;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    if (s[pos] == '-') sign = -1;
    ++pos;
  }
  int ipow = 0;  // accumulated power of i mod 4
  if (pos < s.size() && s[pos] == 'i') {
    ipow = 1;
    ++pos;
  }
  uint64_t z = 0, x = 0;
  int n = 0;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    z <<= 1;
    x <<= 1;
    ++n;
    switch (c) {
      case 'I': break;
      case 'X': x |= 1; break;
      case 'Z': z |= 1; break;
      case 'Y': z |= 1; x |= 1; ipow = (ipow + 3) % 4; break;  // Y = -i ZX
      default: throw std::invalid_argument("parse_pauli: bad character");
    }
  }
  if (n == 0) throw std::invalid_argument("parse_pauli: empty operator");
  if (ipow == 2) sign = -sign;
  else if (ipow != 0) throw std::invalid_argument("parse_pauli: imaginary operator");
  return PauliOp(PhasePoint(z, x, n), sign);
}

inline std::string print_pauli(const PauliOp& p) {
  int n = p.n();
  std::string letters;
  int ipow = 0;
  for (int i = 1; i <= n; ++i) {
    bool zb = p.point.z & bit_for_coord(n, i);
    bool xb = p.point.x & bit_for_coord(n, i);
    if (zb && xb) {
      letters += 'Y';
      ipow = (ipow + 1) % 4;  // ZX = i Y
    } else if (zb) {
      letters += 'Z';
    } else if (xb) {
      letters += 'X';
    } else {
      letters += 'I';
    }
  }
  int sign = p.sign;
  if (ipow == 2) sign = -sign;
  std::string out = (sign > 0) ? "+" : "-";
  if (ipow % 2) out += 'i';
  return out + letters;
}

/// Exact 2^n x 2^n real matrix of sign * Z(a_Z) X(a_X), rebit 1 leftmost in
/// the Kronecker product.
inline Eigen::MatrixXd dense_matrix(const PauliOp& p, int n_cap = 6) {
  int n = p.n();
  if (n > n_cap) throw std::invalid_argument("dense_matrix: n too large");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(1, 1);
  for (int i = 1; i <= n; ++i) {
    bool zb = p.point.z & bit_for_coord(n, i);
    bool xb = p.point.x & bit_for_coord(n, i);
    Eigen::Matrix2d f;
    if (zb && xb) f << 0, 1, -1, 0;
    else if (zb) f << 1, 0, 0, -1;
    else if (xb) f << 0, 1, 1, 0;
    else f << 1, 0, 0, 1;
    // Kron order: existing factor is the left (more significant) one.
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(m.rows() * 2, m.cols() * 2);
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        next.block(2 * r, 2 * c, 2, 2) = m(r, c) * f;
    m = std::move(next);
  }
  return double(p.sign) * m;
}

}  // namespace rebit

#endif  // REBIT_PAULI_HPP

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

#ifndef REBIT_GF2_HPP
#define REBIT_GF2_HPP

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rebit {

/// Linear algebra over Z_2 with one machine word per vector (<= 64 coordinates).
///
/// Coordinate conventions used throughout:
///  - A length-n vector is packed into a uint64_t with coordinate 1 in the
///    most significant used bit; coordinate i is bit (n - i). This makes the
///    integer encoding agree with reading the vector as a binary string.
///  - A phase-space point u = (u_Z, u_X) in Z_2^{2n} is indexed as the 2n-bit
///    integer (u_Z << n) | u_X, z-part in the high bits.

constexpr int kMaxBits = 64;

inline int parity64(uint64_t w) { return std::popcount(w) & 1; }

inline uint64_t bit_for_coord(int len, int coord1based) {
  assert(coord1based >= 1 && coord1based <= len);
  return uint64_t{1} << (len - coord1based);
}

/// A vector in Z_2^len. Addition is XOR; every vector is its own negation.
struct GF2Vec {
  uint64_t bits = 0;
  int len = 0;

  GF2Vec() = default;
  GF2Vec(uint64_t b, int l) : bits(b), len(l) {
    if (l < 0 || l > kMaxBits) throw std::invalid_argument("GF2Vec: bad length");
    if (l < kMaxBits && (b >> l) != 0) throw std::invalid_argument("GF2Vec: bits exceed length");
  }

  bool get(int coord1based) const { return bits & bit_for_coord(len, coord1based); }
  GF2Vec operator+(const GF2Vec& o) const {
    if (len != o.len) throw std::invalid_argument("GF2Vec: length mismatch");
    return GF2Vec(bits ^ o.bits, len);
  }
  bool operator==(const GF2Vec& o) const = default;

  /// Euclidean inner product mod 2.
  int dot(const GF2Vec& o) const {
    if (len != o.len) throw std::invalid_argument("GF2Vec: length mismatch");
    return parity64(bits & o.bits);
  }

  bool is_zero() const { return bits == 0; }

  std::string to_string() const {
    std::string s(len, '0');
    for (int i = 1; i <= len; ++i)
      if (get(i)) s[i - 1] = '1';
    return s;
  }

  static GF2Vec from_string(const std::string& s) {
    uint64_t b = 0;
    for (char c : s) {
      if (c != '0' && c != '1') throw std::invalid_argument("GF2Vec: bad bit string");
      b = (b << 1) | uint64_t(c - '0');
    }
    return GF2Vec(b, int(s.size()));
  }
};

/// A point u = (u_Z, u_X) of the phase space Z_2^{2n}.
struct PhasePoint {
  uint64_t z = 0;
  uint64_t x = 0;
  int n = 0;

  PhasePoint() = default;
  PhasePoint(uint64_t z_, uint64_t x_, int n_) : z(z_), x(x_), n(n_) {
    if (n_ < 0 || 2 * n_ > kMaxBits) throw std::invalid_argument("PhasePoint: bad n");
    if (n_ < kMaxBits && ((z_ >> n_) != 0 || (x_ >> n_) != 0))
      throw std::invalid_argument("PhasePoint: parts exceed n bits");
  }

  static PhasePoint from_index(uint64_t idx, int n) {
    uint64_t mask = (uint64_t{1} << n) - 1;
    return PhasePoint((idx >> n) & mask, idx & mask, n);
  }
  uint64_t index() const { return (z << n) | x; }

  PhasePoint operator+(const PhasePoint& o) const {
    if (n != o.n) throw std::invalid_argument("PhasePoint: size mismatch");
    return PhasePoint(z ^ o.z, x ^ o.x, n);
  }
  bool operator==(const PhasePoint& o) const = default;
  bool is_zero() const { return z == 0 && x == 0; }

  GF2Vec z_part() const { return GF2Vec(z, n); }
  GF2Vec x_part() const { return GF2Vec(x, n); }
};

/// Symplectic inner product [u, v] = (u_Z, v_X) + (v_Z, u_X) mod 2.
inline int sym_inner(const PhasePoint& u, const PhasePoint& v) {
  if (u.n != v.n) throw std::invalid_argument("sym_inner: size mismatch");
  return parity64(u.z & v.x) ^ parity64(v.z & u.x);
}

enum class Form { Euclidean, Symplectic };

/// Swap the z- and x-halves of a 2n-bit packed phase-space vector, so the
/// symplectic product becomes the euclidean one: [u, v] = (u, J v).
inline uint64_t swap_halves(uint64_t w, int n) {
  uint64_t mask = (uint64_t{1} << n) - 1;
  return ((w & mask) << n) | (w >> n);
}

/// A subspace of Z_2^ambient_dim, held in reduced row echelon form with
/// leftmost (most significant) pivots first. The RREF basis is unique per
/// subspace, so equality is row-wise comparison.
class GF2Subspace {
 public:
  GF2Subspace() = default;
  explicit GF2Subspace(int ambient_dim) : ambient_(ambient_dim) {}
  GF2Subspace(std::vector<uint64_t> generators, int ambient_dim) : ambient_(ambient_dim) {
    for (uint64_t g : generators) {
      if (ambient_dim < kMaxBits && (g >> ambient_dim) != 0)
        throw std::invalid_argument("GF2Subspace: generator exceeds ambient dim");
    }
    rows_ = rref(std::move(generators));
  }

  int ambient_dim() const { return ambient_; }
  int dim() const { return int(rows_.size()); }
  const std::vector<uint64_t>& basis() const { return rows_; }

  bool contains(uint64_t v) const {
    for (uint64_t r : rows_) {
      uint64_t p = highest_bit(r);
      if (v & p) v ^= r;
    }
    return v == 0;
  }

  bool operator==(const GF2Subspace& o) const {
    return ambient_ == o.ambient_ && rows_ == o.rows_;
  }
  bool operator<(const GF2Subspace& o) const { return rows_ < o.rows_; }

  /// All 2^dim elements, in coefficient order (Gray-free, plain binary).
  std::vector<uint64_t> elements() const {
    std::vector<uint64_t> out;
    out.reserve(size_t{1} << dim());
    for (uint64_t c = 0; c < (uint64_t{1} << dim()); ++c) out.push_back(element(c));
    return out;
  }

  /// Element for a coefficient word c: xor of basis rows selected by the bits
  /// of c (bit 0 selects the last row).
  uint64_t element(uint64_t coeff) const {
    uint64_t v = 0;
    for (int i = 0; i < dim(); ++i)
      if (coeff & (uint64_t{1} << i)) v ^= rows_[dim() - 1 - i];
    return v;
  }

  /// The minimal-integer representative of the coset v + this.
  uint64_t coset_representative(uint64_t v) const {
    for (uint64_t r : rows_) {
      uint64_t p = highest_bit(r);
      if (v & p) v ^= r;
    }
    return v;
  }

  /// {w : form(w, u) = 0 for all u in this subspace}.
  GF2Subspace orthogonal_complement(Form form) const {
    if (form == Form::Symplectic && (ambient_ % 2) != 0)
      throw std::invalid_argument("symplectic complement needs even ambient dim");
    std::vector<uint64_t> constraints;
    constraints.reserve(rows_.size());
    for (uint64_t r : rows_)
      constraints.push_back(form == Form::Euclidean ? r : swap_halves(r, ambient_ / 2));
    return GF2Subspace(nullspace(constraints, ambient_), ambient_);
  }

  bool is_isotropic() const {
    if (ambient_ % 2 != 0) throw std::invalid_argument("is_isotropic: odd ambient dim");
    int n = ambient_ / 2;
    for (size_t i = 0; i < rows_.size(); ++i)
      for (size_t j = i; j < rows_.size(); ++j)
        if (parity64(rows_[i] & swap_halves(rows_[j], n))) return false;
    return true;
  }

  static std::vector<uint64_t> rref(std::vector<uint64_t> rows) {
    std::vector<uint64_t> basis;
    for (uint64_t v : rows) {
      for (uint64_t b : basis) {
        if (v & highest_bit(b)) v ^= b;
      }
      if (v) basis.push_back(v);
      std::sort(basis.begin(), basis.end(), std::greater<uint64_t>());
    }
    // Back-substitute so each pivot column is cleared in all other rows.
    for (size_t i = 0; i < basis.size(); ++i) {
      uint64_t p = highest_bit(basis[i]);
      for (size_t j = 0; j < basis.size(); ++j)
        if (j != i && (basis[j] & p)) basis[j] ^= basis[i];
    }
    std::sort(basis.begin(), basis.end(), std::greater<uint64_t>());
    return basis;
  }

  /// Solutions w of (w, c) = 0 for every constraint row c.
  static std::vector<uint64_t> nullspace(const std::vector<uint64_t>& constraints, int dim) {
    std::vector<uint64_t> rows = rref(constraints);
    std::vector<int> pivot_cols;  // bit positions
    for (uint64_t r : rows) pivot_cols.push_back(std::countr_zero(highest_bit(r)));
    std::vector<uint64_t> out;
    for (int col = dim - 1; col >= 0; --col) {
      if (std::find(pivot_cols.begin(), pivot_cols.end(), col) != pivot_cols.end()) continue;
      uint64_t v = uint64_t{1} << col;
      for (size_t i = 0; i < rows.size(); ++i)
        if (rows[i] & v) v |= uint64_t{1} << pivot_cols[i];
      out.push_back(v);
    }
    return out;
  }

  static uint64_t highest_bit(uint64_t v) {
    assert(v != 0);
    return uint64_t{1} << (63 - std::countl_zero(v));
  }

 private:
  std::vector<uint64_t> rows_;
  int ambient_ = 0;
};

/// Solve A w = b over Z_2 where the rows of A are given as bit masks and
/// w has `dim` unknowns: (a_i, w) = b_i. Returns the minimal-integer solution,
/// or throws if the system is inconsistent.
inline uint64_t solve_gf2(const std::vector<uint64_t>& a_rows, uint64_t b_bits, int dim) {
  // Augment each row with the rhs in an extra low bit.
  std::vector<uint64_t> aug;
  for (size_t i = 0; i < a_rows.size(); ++i)
    aug.push_back((a_rows[i] << 1) | ((b_bits >> i) & 1));
  std::vector<uint64_t> red = GF2Subspace::rref(aug);
  for (uint64_t r : red)
    if (r == 1) throw std::runtime_error("solve_gf2: inconsistent system");
  // Particular solution via pivots.
  uint64_t w = 0;
  for (uint64_t r : red) {
    uint64_t pivot = GF2Subspace::highest_bit(r) >> 1;  // variable of this row
    // Value of pivot var given current w on the free/later vars.
    uint64_t coeffs = r >> 1;
    int val = (int(r & 1) ^ parity64(coeffs & w)) & 1;
    if (val) w |= pivot;
  }
  // Minimize over the affine solution space: clear high bits using nullspace.
  std::vector<uint64_t> ns = GF2Subspace::nullspace(a_rows, dim);
  GF2Subspace null_sub(ns, dim);
  return null_sub.coset_representative(w);
}

/// All maximal isotropic (Lagrangian) subspaces of Z_2^{2n}, canonical RREF
/// form, sorted. Cardinality is prod_{i=1..n} (2^i + 1).
inline std::vector<GF2Subspace> enumerate_maximal_isotropic(int n, int cap = 5) {
  if (n < 1) throw std::invalid_argument("enumerate_maximal_isotropic: n < 1");
  if (n > cap) throw std::invalid_argument("enumerate_maximal_isotropic: n exceeds cap");
  int dim = 2 * n;
  std::set<std::vector<uint64_t>> layer;
  layer.insert({});  // the zero subspace
  for (int k = 0; k < n; ++k) {
    std::set<std::vector<uint64_t>> next;
    for (const auto& rows : layer) {
      GF2Subspace u(std::vector<uint64_t>(rows), dim);
      GF2Subspace perp = u.orthogonal_complement(Form::Symplectic);
      for (uint64_t v : perp.elements()) {
        if (v == 0 || u.contains(v)) continue;
        auto ext = rows;
        ext.push_back(v);
        next.insert(GF2Subspace::rref(ext));
      }
    }
    layer = std::move(next);
  }
  std::vector<GF2Subspace> out;
  for (const auto& rows : layer) out.emplace_back(std::vector<uint64_t>(rows), dim);
  std::sort(out.begin(), out.end());
  return out;
}

/// A real-valued function on a subspace M, indexed by basis coefficients.
struct RealFunctionOnSubspace {
  GF2Subspace domain;
  std::vector<double> values;  // values[c] = f(domain.element(c))

  RealFunctionOnSubspace() = default;
  RealFunctionOnSubspace(GF2Subspace d, std::vector<double> v)
      : domain(std::move(d)), values(std::move(v)) {
    if (values.size() != (size_t{1} << domain.dim()))
      throw std::invalid_argument("RealFunctionOnSubspace: wrong value count");
  }
};

/// In-place fast Walsh-Hadamard butterfly (unnormalized).
inline void fwht(std::vector<double>& v) {
  size_t sz = v.size();
  assert((sz & (sz - 1)) == 0);
  for (size_t h = 1; h < sz; h <<= 1)
    for (size_t i = 0; i < sz; i += h << 1)
      for (size_t j = i; j < i + h; ++j) {
        double a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
}

/// Binary Fourier transform (Ff)(u) = |M|^{-1/2} sum_x (-1)^{(u,x)} f(x) on a
/// subspace M of Z_2^k with the euclidean character. Computed by one butterfly
/// in coefficient space plus a Gram-matrix index twist.
inline RealFunctionOnSubspace walsh_transform(const RealFunctionOnSubspace& f) {
  int m = f.domain.dim();
  const auto& rows = f.domain.basis();
  // Gram matrix in coefficient coordinates: G[i][j] = (b_i, b_j).
  // Stored as m coefficient-space masks (bit i of gram[j] pairs coeff bits).
  std::vector<uint64_t> gram(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (parity64(rows[m - 1 - i] & rows[m - 1 - j])) gram[i] |= uint64_t{1} << j;
  std::vector<double> h = f.values;
  fwht(h);
  double norm = 1.0 / std::sqrt(double(size_t{1} << m));
  std::vector<double> out(h.size());
  for (uint64_t d = 0; d < h.size(); ++d) {
    uint64_t gd = 0;
    for (int i = 0; i < m; ++i)
      if (parity64(gram[i] & d)) gd |= uint64_t{1} << i;
    out[d] = norm * h[gd];
  }
  return RealFunctionOnSubspace(f.domain, std::move(out));
}

}  // namespace rebit

#endif  // REBIT_GF2_HPP

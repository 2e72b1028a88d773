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

#ifndef REBIT_CSS_HPP
#define REBIT_CSS_HPP

#include <map>
#include <optional>
#include <set>

#include "rebit/wigner.hpp"

namespace rebit {

/// Stabilizer group split into pure-Z rows (labels a_i, signs alpha_i) and
/// pure-X rows (labels b_j, signs beta_j).
struct CSSGroup {
  std::vector<uint64_t> z_rows;  // z-parts, length n each
  std::vector<int> z_signs;
  std::vector<uint64_t> x_rows;  // x-parts
  std::vector<int> x_signs;
  int n = 0;

  CSSGroup(std::vector<uint64_t> zr, std::vector<int> zs, std::vector<uint64_t> xr,
           std::vector<int> xs, int n_)
      : z_rows(std::move(zr)), z_signs(std::move(zs)), x_rows(std::move(xr)),
        x_signs(std::move(xs)), n(n_) {
    if (z_rows.size() != z_signs.size() || x_rows.size() != x_signs.size())
      throw std::invalid_argument("CSSGroup: sign count mismatch");
    GF2Subspace zs_sp(z_rows, n), xs_sp(x_rows, n);
    if (zs_sp.dim() != int(z_rows.size()) || xs_sp.dim() != int(x_rows.size()))
      throw std::invalid_argument("CSSGroup: dependent generators");
    for (uint64_t a : z_rows)
      for (uint64_t b : x_rows)
        if (parity64(a & b)) throw std::invalid_argument("CSSGroup: anticommuting generators");
  }

  int rank() const { return int(z_rows.size() + x_rows.size()); }
  bool full_rank() const { return rank() == n; }

  std::vector<PauliOp> generators() const {
    std::vector<PauliOp> out;
    for (size_t i = 0; i < z_rows.size(); ++i)
      out.emplace_back(PhasePoint(z_rows[i], 0, n), z_signs[i]);
    for (size_t j = 0; j < x_rows.size(); ++j)
      out.emplace_back(PhasePoint(0, x_rows[j], n), x_signs[j]);
    return out;
  }
};

/// General real stabilizer group: commuting independent symmetric operators.
struct StabilizerGroup {
  std::vector<PauliOp> gens;
  int n = 0;

  StabilizerGroup() = default;
  StabilizerGroup(std::vector<PauliOp> g, int n_) : gens(std::move(g)), n(n_) {
    std::vector<uint64_t> pts;
    for (const auto& p : gens) {
      if (p.n() != n_) throw std::invalid_argument("StabilizerGroup: size mismatch");
      if (!in_set_A(p.point)) throw std::invalid_argument("StabilizerGroup: non-symmetric generator");
      pts.push_back(p.point.index());
    }
    for (size_t i = 0; i < gens.size(); ++i)
      for (size_t j = i + 1; j < gens.size(); ++j)
        if (!commutes(gens[i], gens[j]))
          throw std::invalid_argument("StabilizerGroup: generators do not commute");
    if (GF2Subspace(pts, 2 * n_).dim() != int(pts.size()))
      throw std::invalid_argument("StabilizerGroup: dependent generators");
  }

  int rank() const { return int(gens.size()); }

  /// Group element for a generator-selection word (bit 0 selects gens[0]).
  PauliOp element(uint64_t coeff) const {
    PauliOp acc(PhasePoint(0, 0, n), +1);
    for (size_t i = 0; i < gens.size(); ++i)
      if (coeff & (uint64_t{1} << i)) acc = pauli_product(acc, gens[i]);
    return acc;
  }

  std::vector<PauliOp> elements() const {
    std::vector<PauliOp> out;
    for (uint64_t c = 0; c < (uint64_t{1} << gens.size()); ++c) out.push_back(element(c));
    return out;
  }
};

/// The projector product (1/2^k) prod (I + s_i G_i) applied to basis vectors
/// until one survives; unique +1 joint eigenstate for full-rank groups.
inline DenseState stabilizer_state(const std::vector<PauliOp>& gens, int n) {
  check_dense_n(n);
  Eigen::Index d = Eigen::Index(1) << n;
  for (Eigen::Index seed = 0; seed < d; ++seed) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    v(seed) = 1.0;
    for (const auto& g : gens) v = 0.5 * (v + apply_pauli_vec(v, g, n));
    double nrm = v.norm();
    if (nrm > 1e-8) return DenseState(v / nrm, n);
  }
  throw std::runtime_error("stabilizer_state: inconsistent signs (projector vanishes)");
}

inline DenseState css_state(const CSSGroup& g) {
  if (!g.full_rank()) throw std::invalid_argument("css_state: group not full rank");
  return stabilizer_state(g.generators(), g.n);
}

inline DenseState stabilizer_state(const StabilizerGroup& s) {
  if (s.rank() != s.n) throw std::invalid_argument("stabilizer_state: group not full rank");
  return stabilizer_state(s.gens, s.n);
}

struct CSSWignerSupport {
  PhasePoint t;       // canonical (minimal-integer) coset representative
  GF2Subspace v_s;    // subspace of Z_2^{2n}, packed (z || x)
  int n;

  bool contains(const PhasePoint& u) const {
    return v_s.contains(u.index() ^ t.index());
  }
  double value(const PhasePoint& u) const {
    return contains(u) ? 1.0 / double(uint64_t{1} << n) : 0.0;
  }
};

/// Closed-form support of a pure CSS state: a coset t + (N_perp x N) carrying
/// the uniform value 1/2^n, with N the span of the X-type rows.
inline CSSWignerSupport wigner_css_closed_form(const CSSGroup& g) {
  if (!g.full_rank()) throw std::invalid_argument("wigner_css_closed_form: group not full rank");
  int n = g.n;
  GF2Subspace n_sub(g.x_rows, n);
  GF2Subspace n_perp = n_sub.orthogonal_complement(Form::Euclidean);
  // Support in position space: q0 + N with (-1)^{a_i . q0} = alpha_i.
  uint64_t alpha_bits = 0, beta_bits = 0;
  for (size_t i = 0; i < g.z_signs.size(); ++i)
    if (g.z_signs[i] < 0) alpha_bits |= uint64_t{1} << i;
  for (size_t j = 0; j < g.x_signs.size(); ++j)
    if (g.x_signs[j] < 0) beta_bits |= uint64_t{1} << j;
  uint64_t q0 = solve_gf2(g.z_rows, alpha_bits, n);
  // Momentum offset: the amplitude character on N, (-1)^{p0 . b_j} = beta_j.
  uint64_t p0 = solve_gf2(g.x_rows, beta_bits, n);
  std::vector<uint64_t> vs_rows;
  for (uint64_t w : n_perp.basis()) vs_rows.push_back(w << n);
  for (uint64_t b : n_sub.basis()) vs_rows.push_back(b);
  GF2Subspace v_s(vs_rows, 2 * n);
  uint64_t t_idx = v_s.coset_representative((p0 << n) | q0);
  return {PhasePoint::from_index(t_idx, n), v_s, n};
}

/// True iff the group is generated by pure-Z and pure-X elements, decided by
/// row reduction of the label subspace.
inline bool is_css(const StabilizerGroup& s) {
  int n = s.n;
  std::vector<uint64_t> pts;
  for (const auto& p : s.gens) pts.push_back(p.point.index());
  GF2Subspace v(pts, 2 * n);
  // Elements with zero x-part: reduce with the x-half as leading bits.
  std::vector<uint64_t> sw;
  for (uint64_t r : pts) sw.push_back(swap_halves(r, n));
  int z_only = 0, x_only = 0;
  for (uint64_t r : GF2Subspace::rref(sw))
    if ((r >> n) == 0) ++z_only;
  uint64_t mask = (uint64_t{1} << n) - 1;
  for (uint64_t r : GF2Subspace::rref(pts))
    if ((r & mask) != 0 && (r >> n) == 0) ++x_only;
  // x_only counts pure-X elements directly (z-half leading in normal packing
  // pushes z-free rows to the bottom).
  return z_only + x_only == v.dim();
}

/// Extract a CSS generating set from a CSS-form stabilizer group; signs are
/// carried along by evaluating the selecting product of the original
/// generators. Returns nothing if the group is not of CSS form.
inline std::optional<CSSGroup> css_from_stabilizer(const StabilizerGroup& s) {
  if (!is_css(s)) return std::nullopt;
  int n = s.n;
  std::vector<uint64_t> z_rows, x_rows;
  std::vector<int> z_signs, x_signs;
  GF2Subspace z_seen(n), x_seen(n);
  for (const auto& e : s.elements()) {
    if (e.point.is_zero()) continue;
    if (e.point.x == 0 && !z_seen.contains(e.point.z)) {
      z_rows.push_back(e.point.z);
      z_signs.push_back(e.sign);
      std::vector<uint64_t> b = z_seen.basis();
      b.push_back(e.point.z);
      z_seen = GF2Subspace(b, n);
    } else if (e.point.z == 0 && e.point.x != 0 && !x_seen.contains(e.point.x)) {
      x_rows.push_back(e.point.x);
      x_signs.push_back(e.sign);
      std::vector<uint64_t> b = x_seen.basis();
      b.push_back(e.point.x);
      x_seen = GF2Subspace(b, n);
    }
  }
  return CSSGroup(z_rows, z_signs, x_rows, x_signs, n);
}

/// Affine symplectic map u -> F u + t on packed 2n-bit phase points. Row k of
/// f_rows produces output bit (2n-1-k) as a parity of input bits.
struct AffineSymplectic {
  std::vector<uint64_t> f_rows;
  PhasePoint t;
  int n = 0;

  AffineSymplectic() = default;
  AffineSymplectic(std::vector<uint64_t> rows, PhasePoint t_, int n_)
      : f_rows(std::move(rows)), t(t_), n(n_) {
    if (int(f_rows.size()) != 2 * n_) throw std::invalid_argument("AffineSymplectic: wrong row count");
  }

  static AffineSymplectic identity(int n_) {
    std::vector<uint64_t> rows(2 * n_);
    for (int k = 0; k < 2 * n_; ++k) rows[k] = uint64_t{1} << (2 * n_ - 1 - k);
    return AffineSymplectic(std::move(rows), PhasePoint(0, 0, n_), n_);
  }

  uint64_t apply_linear(uint64_t u_idx) const {
    uint64_t out = 0;
    for (size_t k = 0; k < f_rows.size(); ++k)
      if (parity64(f_rows[k] & u_idx)) out |= uint64_t{1} << (f_rows.size() - 1 - k);
    return out;
  }

  PhasePoint apply(const PhasePoint& u) const {
    return PhasePoint::from_index(apply_linear(u.index()) ^ t.index(), n);
  }

  /// this after other: u -> F_this (F_other u + t_other) + t_this.
  AffineSymplectic compose(const AffineSymplectic& other) const {
    std::vector<uint64_t> rows(f_rows.size());
    for (size_t k = 0; k < f_rows.size(); ++k) {
      uint64_t r = 0;
      // Row k of the product: parity over other's rows selected by this row.
      for (size_t m = 0; m < f_rows.size(); ++m)
        if (f_rows[k] & (uint64_t{1} << (f_rows.size() - 1 - m))) r ^= other.f_rows[m];
      rows[k] = r;
    }
    uint64_t t_idx = apply_linear(other.t.index()) ^ t.index();
    return AffineSymplectic(std::move(rows), PhasePoint::from_index(t_idx, n), n);
  }

  AffineSymplectic inverse() const {
    // Gauss-Jordan on [F | I].
    size_t d = f_rows.size();
    std::vector<uint64_t> a = f_rows, inv(d);
    for (size_t k = 0; k < d; ++k) inv[k] = uint64_t{1} << (d - 1 - k);
    for (size_t col = 0; col < d; ++col) {
      uint64_t bit = uint64_t{1} << (d - 1 - col);
      size_t piv = col;
      while (piv < d && !(a[piv] & bit)) ++piv;
      if (piv == d) throw std::runtime_error("AffineSymplectic: singular F");
      std::swap(a[col], a[piv]);
      std::swap(inv[col], inv[piv]);
      for (size_t r = 0; r < d; ++r)
        if (r != col && (a[r] & bit)) {
          a[r] ^= a[col];
          inv[r] ^= inv[col];
        }
    }
    AffineSymplectic out(std::move(inv), PhasePoint(0, 0, n), n);
    uint64_t t_idx = out.apply_linear(t.index());
    out.t = PhasePoint::from_index(t_idx, n);
    return out;
  }

  bool is_symplectic() const {
    int two_n = 2 * n;
    for (int a = 0; a < two_n; ++a)
      for (int b = a + 1; b < two_n; ++b) {
        PhasePoint u = PhasePoint::from_index(uint64_t{1} << a, n);
        PhasePoint v = PhasePoint::from_index(uint64_t{1} << b, n);
        PhasePoint fu = PhasePoint::from_index(apply_linear(u.index()), n);
        PhasePoint fv = PhasePoint::from_index(apply_linear(v.index()), n);
        if (sym_inner(u, v) != sym_inner(fu, fv)) return false;
      }
    return true;
  }

  /// Block structure: F is block-diagonal or block-anti-diagonal over the
  /// (z, x) split, with the two blocks inverse-transpose to each other.
  bool has_css_block_form() const {
    uint64_t zmask = ((uint64_t{1} << n) - 1) << n;
    uint64_t xmask = (uint64_t{1} << n) - 1;
    bool diag = true, anti = true;
    for (int k = 0; k < n; ++k) {
      if (f_rows[k] & xmask) diag = false;
      if (f_rows[k] & zmask) anti = false;
      if (f_rows[n + k] & zmask) diag = false;
      if (f_rows[n + k] & xmask) anti = false;
    }
    return (diag || anti) && is_symplectic();
  }

  bool operator==(const AffineSymplectic& o) const {
    return f_rows == o.f_rows && t == o.t;
  }
  bool operator<(const AffineSymplectic& o) const {
    if (f_rows != o.f_rows) return f_rows < o.f_rows;
    return t.index() < o.t.index();
  }
};

struct CSSCliffordGate {
  enum Kind { HAll, CNOT, PauliX, PauliZ } kind;
  int i = 0;
  int j = 0;

  static CSSCliffordGate h_all() { return {HAll, 0, 0}; }
  static CSSCliffordGate cnot(int i, int j) { return {CNOT, i, j}; }
  static CSSCliffordGate x(int i) { return {PauliX, i, 0}; }
  static CSSCliffordGate z(int i) { return {PauliZ, i, 0}; }

  GateOp to_gate_op() const {
    switch (kind) {
      case HAll: return GateOp::h_all();
      case CNOT: return GateOp::cnot(i, j);
      case PauliX: return GateOp::x(i);
      case PauliZ: return GateOp::z(i);
    }
    throw std::logic_error("unreachable");
  }
};

inline AffineSymplectic gate_to_affine(const CSSCliffordGate& g, int n) {
  AffineSymplectic m = AffineSymplectic::identity(n);
  auto xrow = [n](int i) { return n + (i - 1); };  // row index of x_i
  switch (g.kind) {
    case CSSCliffordGate::HAll:
      for (int k = 0; k < n; ++k) std::swap(m.f_rows[k], m.f_rows[n + k]);
      break;
    case CSSCliffordGate::CNOT: {
      if (g.i == g.j || g.i < 1 || g.j < 1 || g.i > n || g.j > n)
        throw std::invalid_argument("gate_to_affine: bad CNOT indices");
      // z'_i = z_i + z_j, x'_j = x_j + x_i.
      m.f_rows[g.i - 1] ^= uint64_t{1} << (2 * n - 1 - (g.j - 1));
      m.f_rows[xrow(g.j)] ^= uint64_t{1} << (n - g.i);
      break;
    }
    case CSSCliffordGate::PauliX:
      if (g.i < 1 || g.i > n) throw std::invalid_argument("gate_to_affine: bad index");
      m.t = PhasePoint(0, bit_for_coord(n, g.i), n);
      break;
    case CSSCliffordGate::PauliZ:
      if (g.i < 1 || g.i > n) throw std::invalid_argument("gate_to_affine: bad index");
      m.t = PhasePoint(bit_for_coord(n, g.i), 0, n);
      break;
  }
  return m;
}

/// Word order is circuit order: first element applied first.
inline AffineSymplectic word_to_affine(const std::vector<CSSCliffordGate>& word, int n) {
  AffineSymplectic acc = AffineSymplectic::identity(n);
  for (const auto& g : word) acc = gate_to_affine(g, n).compose(acc);
  return acc;
}

/// Exact conjugation of a sign-tracked generator by one gate.
inline PauliOp conjugate_by_gate(const PauliOp& p, const CSSCliffordGate& g, int n) {
  AffineSymplectic m = gate_to_affine(g, n);
  PhasePoint moved = PhasePoint::from_index(m.apply_linear(p.point.index()), n);
  int sign = p.sign;
  if (sym_inner(m.t, moved)) sign = -sign;
  // The simultaneous Hadamard reverses the Z/X factor order, which costs a
  // sign on labels with odd overlap.
  if (g.kind == CSSCliffordGate::HAll && parity64(p.point.z & p.point.x)) sign = -sign;
  return PauliOp(moved, sign);
}

inline StabilizerGroup tableau_apply(const StabilizerGroup& s, const CSSCliffordGate& g) {
  std::vector<PauliOp> gens;
  gens.reserve(s.gens.size());
  for (const auto& p : s.gens) gens.push_back(conjugate_by_gate(p, g, s.n));
  return StabilizerGroup(std::move(gens), s.n);
}

inline DenseDensity apply_word(const DenseDensity& rho, const std::vector<CSSCliffordGate>& word) {
  DenseDensity out = rho;
  for (const auto& g : word) out = apply_gate(out, g.to_gate_op());
  return out;
}

inline bool covariance_check(const DenseDensity& rho, const std::vector<CSSCliffordGate>& word,
                             double tol = 1e-10) {
  WignerTable before = wigner_of_density(rho);
  WignerTable after = wigner_of_density(apply_word(rho, word));
  AffineSymplectic m = word_to_affine(word, rho.n);
  for (uint64_t idx = 0; idx < before.values.size(); ++idx) {
    PhasePoint u = PhasePoint::from_index(idx, rho.n);
    if (std::abs(after.at(m.apply(u)) - before.values[idx]) > tol) return false;
  }
  return true;
}

/// All real stabilizer groups of rank n: maximal isotropic label subspaces
/// whose basis lies in A, crossed with all sign patterns. None contains -I.
inline std::vector<StabilizerGroup> enumerate_real_stabilizer_groups(int n) {
  std::vector<StabilizerGroup> out;
  for (const auto& lag : enumerate_maximal_isotropic(n)) {
    bool all_a = true;
    for (uint64_t r : lag.basis())
      if (!in_set_A(PhasePoint::from_index(r, n))) all_a = false;
    if (!all_a) continue;
    for (uint64_t signs = 0; signs < (uint64_t{1} << n); ++signs) {
      std::vector<PauliOp> gens;
      for (int k = 0; k < n; ++k) {
        int sgn = (signs >> k) & 1 ? -1 : +1;
        gens.emplace_back(PhasePoint::from_index(lag.basis()[k], n), sgn);
      }
      out.emplace_back(std::move(gens), n);
    }
  }
  return out;
}

struct HudsonReport {
  int n;
  int num_states;
  int num_css;
  int num_nonneg;
  bool all_match;  // nonnegative exactly for the CSS states
  double random_min_w;
  int random_nonneg_count;
  int random_samples;
};

inline HudsonReport hudson_verify(int n, int random_samples = 1000, uint64_t seed = 12345) {
  if (n > 3) throw std::invalid_argument("hudson_verify: n too large");
  HudsonReport rep{n, 0, 0, 0, true, 0.0, 0, random_samples};
  for (const auto& s : enumerate_real_stabilizer_groups(n)) {
    DenseState psi = stabilizer_state(s);
    NegativityReport neg = negativity(wigner_of_pure_fast(psi));
    bool css = is_css(s);
    ++rep.num_states;
    if (css) ++rep.num_css;
    if (neg.is_nonnegative) ++rep.num_nonneg;
    if (neg.is_nonnegative != css) rep.all_match = false;
  }
  Rng rng(seed);
  double mn = 0;
  for (int k = 0; k < random_samples; ++k) {
    DenseState psi = random_real_state(n, rng);
    NegativityReport neg = negativity(wigner_of_pure_fast(psi));
    mn = std::min(mn, neg.min_value);
    if (neg.is_nonnegative) ++rep.random_nonneg_count;
  }
  rep.random_min_w = mn;
  return rep;
}

/// Closure of the affine images of the generating gates, for the group
/// structure check at small n.
inline std::set<AffineSymplectic> enumerate_affine_group(int n) {
  std::vector<AffineSymplectic> gens;
  gens.push_back(gate_to_affine(CSSCliffordGate::h_all(), n));
  for (int i = 1; i <= n; ++i) {
    gens.push_back(gate_to_affine(CSSCliffordGate::x(i), n));
    gens.push_back(gate_to_affine(CSSCliffordGate::z(i), n));
    for (int j = 1; j <= n; ++j)
      if (i != j) gens.push_back(gate_to_affine(CSSCliffordGate::cnot(i, j), n));
  }
  std::set<AffineSymplectic> group;
  std::vector<AffineSymplectic> frontier{AffineSymplectic::identity(n)};
  group.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<AffineSymplectic> next;
    for (const auto& m : frontier)
      for (const auto& g : gens) {
        AffineSymplectic prod = g.compose(m);
        if (group.insert(prod).second) next.push_back(prod);
      }
    frontier = std::move(next);
  }
  return group;
}

// Stabilizer text format: one signed Pauli string per line.

inline StabilizerGroup parse_stabilizer_text(const std::string& text) {
  std::vector<PauliOp> gens;
  std::istringstream is(text);
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos || line[start] == '#') continue;
    PauliOp p = parse_pauli(line.substr(start));
    if (n == 0) n = p.n();
    gens.push_back(p);
  }
  if (gens.empty()) throw std::invalid_argument("parse_stabilizer_text: no generators");
  return StabilizerGroup(std::move(gens), n);
}

inline std::string print_stabilizer_text(const StabilizerGroup& s) {
  std::string out;
  for (const auto& p : s.gens) out += print_pauli(p) + "\n";
  return out;
}

}  // namespace rebit

#endif  // REBIT_CSS_HPP

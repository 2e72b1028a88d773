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

#ifndef REBIT_CONTEXTUALITY_HPP
#define REBIT_CONTEXTUALITY_HPP

#include "rebit/sim.hpp"

namespace rebit {

/// Witness over an isotropic subspace U = span(a_1..a_m) with a dual set
/// b_1..b_m satisfying [a_i, b_j] = delta_ij.
struct WitnessSpec {
  std::vector<PhasePoint> basis;
  std::vector<PhasePoint> conj;
  int n = 0;

  WitnessSpec(std::vector<PhasePoint> a, std::vector<PhasePoint> b, int n_)
      : basis(std::move(a)), conj(std::move(b)), n(n_) {
    if (basis.size() != conj.size()) throw std::invalid_argument("WitnessSpec: size mismatch");
    std::vector<uint64_t> rows;
    for (const auto& ai : basis) {
      if (ai.n != n_ || !in_set_A(ai))
        throw std::invalid_argument("WitnessSpec: basis label not a symmetric observable");
      rows.push_back(ai.index());
    }
    GF2Subspace u(rows, 2 * n_);
    if (u.dim() != int(basis.size()))
      throw std::invalid_argument("WitnessSpec: dependent basis");
    if (!u.is_isotropic()) throw std::invalid_argument("WitnessSpec: basis not isotropic");
    for (size_t i = 0; i < basis.size(); ++i)
      for (size_t j = 0; j < conj.size(); ++j)
        if (sym_inner(basis[i], conj[j]) != (i == j ? 1 : 0))
          throw std::invalid_argument("WitnessSpec: duality relation fails");
  }

  int m() const { return int(basis.size()); }

  GF2Subspace u_subspace() const {
    std::vector<uint64_t> rows;
    for (const auto& a : basis) rows.push_back(a.index());
    return GF2Subspace(rows, 2 * n);
  }

  /// Shift vector for an outcome assignment x.
  PhasePoint eta_bar(const std::vector<int>& x) const {
    if (int(x.size()) != m()) throw std::invalid_argument("eta_bar: wrong x length");
    PhasePoint e(0, 0, n);
    for (size_t i = 0; i < conj.size(); ++i)
      if (x[i]) e = e + conj[i];
    return e;
  }
};

/// Solve [a_i, b_j] = delta_ij for the dual set; minimal-integer solutions
/// keep the result deterministic.
inline std::vector<PhasePoint> conjugate_basis(const std::vector<PhasePoint>& basis, int n) {
  std::vector<uint64_t> rows;
  for (const auto& a : basis) rows.push_back(swap_halves(a.index(), n));
  GF2Subspace u_check(rows, 2 * n);
  if (u_check.dim() != int(basis.size()))
    throw std::invalid_argument("conjugate_basis: dependent basis");
  std::vector<PhasePoint> out;
  for (size_t j = 0; j < basis.size(); ++j) {
    uint64_t rhs = uint64_t{1} << j;
    out.push_back(PhasePoint::from_index(solve_gf2(rows, rhs, 2 * n), n));
  }
  return out;
}

/// Expectation route: sum over all products of the basis observables with the
/// (-1)^{z.x} twist, signs carried by the tracked product.
inline double witness_value_dense(const DenseDensity& rho, const WitnessSpec& spec,
                                  const std::vector<int>& x) {
  int m = spec.m();
  double acc = 0;
  for (uint64_t z = 0; z < (uint64_t{1} << m); ++z) {
    PauliOp prod(PhasePoint(0, 0, spec.n), +1);
    int twist = 0;
    for (int i = 0; i < m; ++i)
      if (z & (uint64_t{1} << i)) {
        prod = pauli_product(prod, PauliOp(spec.basis[i], +1));
        twist ^= x[i] & 1;
      }
    double term = expectation(rho, prod);
    acc += twist ? -term : term;
  }
  return acc;
}

/// Phase-space route: 2^m times the Wigner mass on the coset of the
/// symplectic complement of U shifted by eta_bar(x).
inline double witness_value_wigner(const WignerTable& w, const WitnessSpec& spec,
                                   const std::vector<int>& x) {
  GF2Subspace u_perp = spec.u_subspace().orthogonal_complement(Form::Symplectic);
  uint64_t shift = spec.eta_bar(x).index();
  double acc = 0;
  for (uint64_t v : u_perp.elements()) acc += w.values[v ^ shift];
  return double(uint64_t{1} << spec.m()) * acc;
}

/// Both routes, cross-checked.
inline double witness_value(const DenseDensity& rho, const WitnessSpec& spec,
                            const std::vector<int>& x, double tol = 1e-9) {
  double dense = witness_value_dense(rho, spec, x);
  double wig = witness_value_wigner(wigner_of_density(rho), spec, x);
  if (std::abs(dense - wig) > tol)
    throw std::runtime_error("witness_value: evaluation routes disagree");
  return dense;
}

enum class Verdict { NONCONTEXTUAL, CONTEXTUAL, INDETERMINATE };

inline std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::NONCONTEXTUAL: return "NONCONTEXTUAL";
    case Verdict::CONTEXTUAL: return "CONTEXTUAL";
    case Verdict::INDETERMINATE: return "INDETERMINATE";
  }
  return "?";
}

struct Classification {
  Verdict verdict;
  WignerTable table;                 // certificate for the nonnegative case
  std::optional<GF2Subspace> cert_u;  // violating Lagrangian, contextual case
  std::optional<PhasePoint> cert_nu;
  double cert_sum = 0.0;             // the negative coset sum
};

/// Nonnegative everywhere: a hidden variable model exists. Otherwise look for
/// a maximal isotropic subspace whose shifted mass is negative; search order
/// (canonical subspaces, then integer shifts) makes the certificate
/// deterministic.
inline Classification classify(const WignerTable& w, int lagrangian_cap = 5) {
  int n = w.n;
  if (n > lagrangian_cap) throw std::invalid_argument("classify: n exceeds cap");
  Classification out{Verdict::INDETERMINATE, w, std::nullopt, std::nullopt, 0.0};
  if (negativity(w).min_value >= -1e-10) {
    out.verdict = Verdict::NONCONTEXTUAL;
    return out;
  }
  for (const auto& u : enumerate_maximal_isotropic(n)) {
    std::vector<uint64_t> els = u.elements();
    for (uint64_t nu = 0; nu < w.values.size(); ++nu) {
      double s = 0;
      for (uint64_t v : els) s += w.values[v ^ nu];
      if (s < -1e-9) {
        out.verdict = Verdict::CONTEXTUAL;
        out.cert_u = u;
        out.cert_nu = PhasePoint::from_index(nu, n);
        out.cert_sum = s;
        return out;
      }
    }
  }
  return out;
}

inline Classification classify(const DenseDensity& rho, int lagrangian_cap = 5) {
  return classify(wigner_of_density(rho), lagrangian_cap);
}

/// For states diagonal in a real stabilizer eigenbasis the negativity test is
/// exact in both directions, so INDETERMINATE never occurs.
inline Classification classify_stabilizer_diagonal(const DenseDensity& rho,
                                                   const StabilizerGroup& s) {
  for (const auto& g : s.gens) {
    Eigen::MatrixXd t = dense_matrix(g);
    if ((t * rho.mat * t.transpose() - rho.mat).cwiseAbs().maxCoeff() > 1e-9)
      throw std::invalid_argument("classify_stabilizer_diagonal: state not diagonal in basis");
  }
  Classification out = classify(rho);
  if (out.verdict == Verdict::INDETERMINATE)
    throw std::runtime_error("classify_stabilizer_diagonal: equivalence violated");
  return out;
}

/// Outcome distribution predicted by the phase-space hidden variable model.
inline std::map<std::string, double> hvm_predict(const WignerTable& w, const ObservableSet& m) {
  if (negativity(w).min_value < -1e-10)
    throw std::invalid_argument("hvm_predict: negative table");
  if (!is_jointly_measurable(m))
    throw std::invalid_argument("hvm_predict: set not jointly measurable");
  std::map<std::string, double> out;
  for (uint64_t idx = 0; idx < w.values.size(); ++idx) {
    if (w.values[idx] == 0.0) continue;
    PhasePoint u = PhasePoint::from_index(idx, w.n);
    std::string key;
    for (const auto& p : m) {
      int lambda = sym_inner(u, p.point) ? -1 : +1;
      key += (lambda * p.sign > 0) ? '+' : '-';
    }
    out[key] += w.values[idx];
  }
  return out;
}

struct HvmAuditReport {
  int n;
  uint64_t num_assignments;
  uint64_t num_pair_constraints;
  bool all_pass;
  bool mermin_bottom_row_excluded;  // {XZ, ZX, -YY} is not jointly measurable
};

/// Every point assignment lambda_u(T_a) = (-1)^{[u,a]} is multiplicative on
/// all jointly measurable pairs, so no state-independent obstruction exists.
inline HvmAuditReport hvm_consistency_audit(int n) {
  if (n > 3) throw std::invalid_argument("hvm_consistency_audit: n too large");
  HvmAuditReport rep{n, uint64_t{1} << (2 * n), 0, true, false};
  uint64_t npoints = uint64_t{1} << (2 * n);
  std::vector<PhasePoint> symmetric;
  for (uint64_t i = 0; i < npoints; ++i) {
    PhasePoint a = PhasePoint::from_index(i, n);
    if (in_set_A(a)) symmetric.push_back(a);
  }
  for (const auto& a : symmetric)
    for (const auto& b : symmetric) {
      if (a.index() >= b.index()) continue;
      ObservableSet m{PauliOp(a, +1), PauliOp(b, +1)};
      bool jm;
      try {
        jm = is_jointly_measurable(m);
      } catch (const std::invalid_argument&) {
        continue;
      }
      if (!jm) continue;
      ++rep.num_pair_constraints;
      PhasePoint ab = a + b;
      for (uint64_t ui = 0; ui < npoints; ++ui) {
        PhasePoint u = PhasePoint::from_index(ui, n);
        int la = sym_inner(u, a), lb = sym_inner(u, b), lab = sym_inner(u, ab);
        if (((la ^ lb) & 1) != lab) rep.all_pass = false;
      }
    }
  if (n == 2) {
    // Rotated square bottom row: X1Z2, Z1X2 and their product -Y1Y2. The pair
    // fails joint measurability, so the row imposes no constraint.
    ObservableSet bottom{parse_pauli("+XZ"), parse_pauli("+ZX")};
    rep.mermin_bottom_row_excluded = !is_jointly_measurable(bottom);
  }
  return rep;
}

struct PullbackResult {
  bool rejected = false;
  std::string reject_reason;
  std::optional<WitnessSpec> spec;
  std::vector<int> x;
};

/// Transport a witness backwards through one circuit step. Unitaries map the
/// basis through the inverse affine action; an O-measurement commuting with
/// all of U leaves the witness untouched, and an anticommuting one cannot
/// have preceded a maximally negative witness value.
inline PullbackResult witness_pullback(const WitnessSpec& spec, const std::vector<int>& x,
                                       const SimStep& step) {
  PullbackResult res;
  if (step.kind == SimStep::Measure) {
    for (const auto& a : spec.basis)
      if (sym_inner(a, step.observable)) {
        res.rejected = true;
        res.reject_reason = "measured observable anticommutes with the witness subspace";
        return res;
      }
    res.spec = spec;
    res.x = x;
    return res;
  }
  AffineSymplectic inv = gate_to_affine(step.gate, spec.n).inverse();
  std::vector<PhasePoint> new_basis, new_conj;
  for (const auto& a : spec.basis)
    new_basis.push_back(PhasePoint::from_index(inv.apply_linear(a.index()), spec.n));
  for (const auto& b : spec.conj)
    new_conj.push_back(PhasePoint::from_index(inv.apply_linear(b.index()), spec.n));
  WitnessSpec ns(new_basis, new_conj, spec.n);
  // New outcome bits from the transported shift vector.
  PhasePoint eta = spec.eta_bar(x);
  PhasePoint new_eta = inv.apply(eta);
  std::vector<int> nx;
  for (const auto& a : ns.basis) nx.push_back(sym_inner(a, new_eta));
  res.spec = std::move(ns);
  res.x = std::move(nx);
  return res;
}

}  // namespace rebit

#endif  // REBIT_CONTEXTUALITY_HPP

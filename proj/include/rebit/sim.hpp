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

#ifndef REBIT_SIM_HPP
#define REBIT_SIM_HPP

#include <fstream>
#include <map>

#include "rebit/css.hpp"

namespace rebit {

struct SimStep {
  enum Kind { Unitary, Measure } kind;
  CSSCliffordGate gate{CSSCliffordGate::HAll, 0, 0};
  PhasePoint observable;  // label in O for measurement steps

  static SimStep unitary(CSSCliffordGate g) {
    SimStep s{Unitary, g, PhasePoint()};
    return s;
  }
  static SimStep measure(PhasePoint a) {
    if (!in_set_O(a)) throw std::invalid_argument("SimStep: observable not in O");
    SimStep s{Measure, CSSCliffordGate::h_all(), a};
    return s;
  }
};

/// Initial state as either one-rebit factors or one explicit table; both must
/// be nonnegative for the sampler to apply.
struct SimCircuit {
  int n = 0;
  std::vector<WignerTable> factors;    // n one-rebit tables, or
  std::optional<WignerTable> full;     // an explicit 4^n-point table
  std::vector<SimStep> steps;

  const WignerTable& full_initial() const {
    if (full) return *full;
    throw std::logic_error("SimCircuit: no explicit table");
  }

  void validate() const {
    if (full) {
      if (full->n != n) throw std::invalid_argument("SimCircuit: table size mismatch");
      if (negativity(*full).min_value < -1e-10)
        throw std::invalid_argument("SimCircuit: negative initial table");
      if (std::abs(full->sum() - 1.0) > 1e-9)
        throw std::invalid_argument("SimCircuit: initial table not normalized");
    } else {
      if (int(factors.size()) != n) throw std::invalid_argument("SimCircuit: need n factors");
      for (const auto& f : factors) {
        if (f.n != 1) throw std::invalid_argument("SimCircuit: factors must be one-rebit");
        if (negativity(f).min_value < -1e-10)
          throw std::invalid_argument("SimCircuit: negative initial factor");
        if (std::abs(f.sum() - 1.0) > 1e-9)
          throw std::invalid_argument("SimCircuit: factor not normalized");
      }
    }
  }

  /// The full product table (test harness path, 4^n cost).
  WignerTable initial_table() const {
    if (full) return *full;
    WignerTable acc = factors.at(0);
    for (size_t k = 1; k < factors.size(); ++k) {
      const WignerTable& f = factors[k];
      int na = acc.n, nn = na + 1;
      std::vector<double> v(size_t{1} << (2 * nn));
      for (uint64_t ia = 0; ia < acc.values.size(); ++ia)
        for (uint64_t ib = 0; ib < f.values.size(); ++ib) {
          PhasePoint ua = PhasePoint::from_index(ia, na);
          PhasePoint ub = PhasePoint::from_index(ib, 1);
          PhasePoint u((ua.z << 1) | ub.z, (ua.x << 1) | ub.x, nn);
          v[u.index()] = acc.values[ia] * f.values[ib];
        }
      acc = WignerTable(nn, std::move(v));
    }
    return acc;
  }
};

inline PhasePoint sample_from_table(const WignerTable& w, Rng& rng) {
  double r = rng.next_double();
  double acc = 0;
  for (uint64_t idx = 0; idx < w.values.size(); ++idx) {
    double v = std::max(w.values[idx], 0.0);
    acc += v;
    if (r < acc) return PhasePoint::from_index(idx, w.n);
  }
  return PhasePoint::from_index(uint64_t(w.values.size() - 1), w.n);
}

inline PhasePoint sample_initial(const SimCircuit& c, Rng& rng) {
  if (c.full) return sample_from_table(*c.full, rng);
  uint64_t z = 0, x = 0;
  for (const auto& f : c.factors) {
    PhasePoint u1 = sample_from_table(f, rng);
    z = (z << 1) | u1.z;
    x = (x << 1) | u1.x;
  }
  return PhasePoint(z, x, c.n);
}

inline PhasePoint step_unitary(const PhasePoint& u, const CSSCliffordGate& g) {
  return gate_to_affine(g, u.n).apply(u);
}

struct MeasureStepResult {
  int s;
  PhasePoint u;
};

/// Outcome is deterministic given the point; the point then diffuses over
/// {u, u+a} with a fair coin.
inline MeasureStepResult step_measure(const PhasePoint& u, const PhasePoint& a, Rng& rng) {
  if (!in_set_O(a)) throw std::invalid_argument("step_measure: observable not in O");
  int s = sym_inner(u, a) ? -1 : +1;
  PhasePoint next = rng.next_bool() ? u + a : u;
  return {s, next};
}

struct SampleTrace {
  uint64_t seed;
  std::vector<PhasePoint> points;
  std::vector<int> outcomes;
};

inline SampleTrace run_one(const SimCircuit& c, Rng& rng, uint64_t seed_tag = 0) {
  SampleTrace tr;
  tr.seed = seed_tag;
  PhasePoint u = sample_initial(c, rng);
  tr.points.push_back(u);
  for (const auto& st : c.steps) {
    if (st.kind == SimStep::Unitary) {
      u = step_unitary(u, st.gate);
    } else {
      auto [s, nu] = step_measure(u, st.observable, rng);
      tr.outcomes.push_back(s);
      u = nu;
    }
    tr.points.push_back(u);
  }
  return tr;
}

inline std::string outcome_key(const std::vector<int>& outcomes) {
  std::string k;
  for (int s : outcomes) k += (s > 0) ? '+' : '-';
  return k;
}

/// Empirical joint outcome distribution; per-sample streams keep the result
/// independent of iteration order.
inline std::map<std::string, double> run(const SimCircuit& c, uint64_t num_samples,
                                         uint64_t seed) {
  c.validate();
  std::map<std::string, uint64_t> counts;
  for (uint64_t k = 0; k < num_samples; ++k) {
    Rng rng(seed, k);
    SampleTrace tr = run_one(c, rng, k);
    ++counts[outcome_key(tr.outcomes)];
  }
  std::map<std::string, double> freq;
  for (const auto& [key, cnt] : counts) freq[key] = double(cnt) / double(num_samples);
  return freq;
}

/// Table-level measurement update: keep the s-compatible half, average over
/// the +a translate. Unnormalized by default; the normalized variant divides
/// by the outcome probability.
inline WignerTable wigner_update_measurement(const WignerTable& w, const PhasePoint& a, int s,
                                             bool normalized = false) {
  if (!in_set_O(a)) throw std::invalid_argument("wigner_update_measurement: observable not in O");
  std::vector<double> out(w.values.size(), 0.0);
  for (uint64_t idx = 0; idx < w.values.size(); ++idx) {
    PhasePoint u = PhasePoint::from_index(idx, w.n);
    int su = sym_inner(u, a) ? -1 : +1;
    if (su != s) continue;
    out[idx] = 0.5 * (w.values[idx] + w.values[(u + a).index()]);
  }
  WignerTable res(w.n, std::move(out));
  if (normalized) {
    double p = res.sum();
    if (p <= 0) throw std::runtime_error("wigner_update_measurement: zero-probability outcome");
    for (double& v : res.values) v /= p;
  }
  return res;
}

/// Exact Born distribution of the same circuit by dense branch enumeration;
/// the oracle the sampler is compared against.
inline void dense_distribution_rec(const DenseDensity& rho, const std::vector<SimStep>& steps,
                                   size_t at, double prob, std::vector<int>& outcomes,
                                   std::map<std::string, double>& out) {
  if (prob < 1e-14) return;
  if (at == steps.size()) {
    out[outcome_key(outcomes)] += prob;
    return;
  }
  const SimStep& st = steps[at];
  if (st.kind == SimStep::Unitary) {
    dense_distribution_rec(apply_gate(rho, st.gate.to_gate_op()), steps, at + 1, prob, outcomes,
                           out);
    return;
  }
  PauliOp p(st.observable, +1);
  Eigen::MatrixXd pm = dense_matrix(p);
  Eigen::Index d = rho.mat.rows();
  for (int s : {+1, -1}) {
    Eigen::MatrixXd proj = 0.5 * (Eigen::MatrixXd::Identity(d, d) + double(s) * pm);
    Eigen::MatrixXd post = proj * rho.mat * proj;
    double branch_p = post.trace();
    if (branch_p < 1e-14) continue;
    outcomes.push_back(s);
    dense_distribution_rec(DenseDensity(post / branch_p, rho.n), steps, at + 1, prob * branch_p,
                           outcomes, out);
    outcomes.pop_back();
  }
}

inline std::map<std::string, double> dense_distribution(const DenseDensity& initial,
                                                        const std::vector<SimStep>& steps) {
  std::map<std::string, double> out;
  std::vector<int> outcomes;
  dense_distribution_rec(initial, steps, 0, 1.0, outcomes, out);
  return out;
}

inline double total_variation(const std::map<std::string, double>& a,
                              const std::map<std::string, double>& b) {
  std::map<std::string, double> diff = a;
  for (const auto& [k, v] : b) diff[k] -= v;
  double tv = 0;
  for (const auto& [k, v] : diff) tv += std::abs(v);
  return 0.5 * tv;
}

// Circuit text format, one instruction per line:
//   INIT ZERO <n> | INIT MIXED <n> | INIT <json-table-file>
//   CNOT i j | HALL | X i | Z i | MEASX <mask> | MEASZ <mask>

inline SimCircuit parse_circuit_text(const std::string& text) {
  SimCircuit c;
  std::istringstream is(text);
  std::string line;
  bool have_init = false;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    if (op[0] == '#') continue;
    if (op == "INIT") {
      std::string what;
      ls >> what;
      if (what == "ZERO" || what == "MIXED") {
        int n = 0;
        if (!(ls >> n) || n < 1) throw std::invalid_argument("circuit: INIT needs a rebit count");
        c.n = n;
        for (int k = 0; k < n; ++k) {
          if (what == "ZERO")
            c.factors.push_back(WignerTable(1, {0.5, 0.0, 0.5, 0.0}));
          else
            c.factors.push_back(WignerTable(1, {0.25, 0.25, 0.25, 0.25}));
        }
      } else {
        std::ifstream f(what);
        if (!f) throw std::invalid_argument("circuit: cannot open table file " + what);
        nlohmann::json j;
        f >> j;
        WignerTable w = wigner_from_json(j);
        c.n = w.n;
        c.full = std::move(w);
      }
      have_init = true;
    } else if (op == "CNOT") {
      int i, j;
      if (!(ls >> i >> j)) throw std::invalid_argument("circuit: CNOT needs two indices");
      c.steps.push_back(SimStep::unitary(CSSCliffordGate::cnot(i, j)));
    } else if (op == "HALL") {
      c.steps.push_back(SimStep::unitary(CSSCliffordGate::h_all()));
    } else if (op == "X" || op == "Z") {
      int i;
      if (!(ls >> i)) throw std::invalid_argument("circuit: Pauli needs an index");
      c.steps.push_back(SimStep::unitary(op == "X" ? CSSCliffordGate::x(i)
                                                   : CSSCliffordGate::z(i)));
    } else if (op == "MEASX" || op == "MEASZ") {
      std::string mask;
      if (!(ls >> mask)) throw std::invalid_argument("circuit: measurement needs a mask");
      GF2Vec m = GF2Vec::from_string(mask);
      if (m.len != c.n) throw std::invalid_argument("circuit: mask length mismatch");
      PhasePoint a = (op == "MEASX") ? PhasePoint(0, m.bits, c.n) : PhasePoint(m.bits, 0, c.n);
      if (a.is_zero()) throw std::invalid_argument("circuit: zero measurement mask");
      c.steps.push_back(SimStep::measure(a));
    } else {
      throw std::invalid_argument("circuit: unknown instruction " + op);
    }
  }
  if (!have_init) throw std::invalid_argument("circuit: missing INIT");
  return c;
}

/// Dense initial density matching the circuit's INIT, for oracle comparison.
inline DenseDensity dense_initial(const SimCircuit& c) {
  if (c.full) return reconstruct(*c.full);
  // Factor tables are reconstructed rebit-wise and tensored.
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(1, 1);
  for (size_t k = 0; k < c.factors.size(); ++k) {
    Eigen::MatrixXd f = reconstruct(c.factors[k]).mat;
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(acc.rows() * 2, acc.cols() * 2);
    for (Eigen::Index r = 0; r < acc.rows(); ++r)
      for (Eigen::Index col = 0; col < acc.cols(); ++col)
        next.block(2 * r, 2 * col, 2, 2) = acc(r, col) * f;
    acc = std::move(next);
  }
  return DenseDensity(std::move(acc), c.n);
}

inline std::string histogram_to_csv(const std::map<std::string, double>& freq) {
  std::ostringstream os;
  os << "outcomes,frequency\n" << std::setprecision(17);
  for (const auto& [k, v] : freq) os << k << ',' << v << '\n';
  return os.str();
}

}  // namespace rebit

#endif  // REBIT_SIM_HPP

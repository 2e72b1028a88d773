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

#ifndef REBIT_INJECTION_HPP
#define REBIT_INJECTION_HPP

#include "rebit/contextuality.hpp"

namespace rebit {

/// Real embedding of a complex n-qubit state on n+1 rebits. The extra rebit
/// tracks the real/imaginary part: |0> for Re, |1> for Im, appended last.
inline DenseState encode(const ComplexState& psi) {
  Eigen::Index d = psi.amp.size();
  Eigen::VectorXd out(2 * d);
  for (Eigen::Index v = 0; v < d; ++v) {
    out(2 * v) = psi.amp(v).real();
    out(2 * v + 1) = psi.amp(v).imag();
  }
  return DenseState(std::move(out), psi.n + 1);
}

/// Inverse of encode with the tracker rebit at an arbitrary position and the
/// data rebits listed in logical order (positions are 1-based).
inline ComplexState decode_at(const DenseState& enc, const std::vector<int>& data_pos,
                              int tracker_pos) {
  int nd = int(data_pos.size());
  Eigen::Index d = Eigen::Index(1) << nd;
  uint64_t tbit = rebit_bit(enc.n, tracker_pos);
  Eigen::VectorXcd out(d);
  for (Eigen::Index v = 0; v < d; ++v) {
    uint64_t idx = 0;
    for (int k = 0; k < nd; ++k)
      if (v & (Eigen::Index(1) << (nd - 1 - k))) idx |= rebit_bit(enc.n, data_pos[k]);
    out(v) = std::complex<double>(enc.amp(Eigen::Index(idx)), enc.amp(Eigen::Index(idx | tbit)));
  }
  double nrm = out.norm();
  if (nrm < 1e-12) throw std::runtime_error("decode_at: vanishing state");
  return ComplexState(out / nrm, nd);
}

inline ComplexState decode(const DenseState& enc) {
  std::vector<int> data_pos(size_t(enc.n - 1));
  for (int k = 0; k < enc.n - 1; ++k) data_pos[size_t(k)] = k + 1;
  return decode_at(enc, data_pos, enc.n);
}

enum class AncillaKind { A, B };

/// |A> encodes (|0> + e^{i pi/4}|1>)/sqrt(2); |B> is the two-rebit resource
/// consumed by the teleported single-rebit Hadamard.
inline DenseState ancilla(AncillaKind kind) {
  if (kind == AncillaKind::A) {
    Eigen::VectorXcd a(2);
    a << 1.0, std::exp(std::complex<double>(0, M_PI / 4));
    a /= std::sqrt(2.0);
    return encode(ComplexState(std::move(a), 1));
  }
  Eigen::VectorXd b(4);
  b << 0.5, 0.5, 0.5, -0.5;
  return DenseState(std::move(b), 2);
}

struct LogicalGate {
  enum Kind { H, T, CNOT, MeasZ } kind;
  int i = 0;
  int j = 0;
};

using LogicalCircuit = std::vector<LogicalGate>;

inline LogicalCircuit parse_logical_circuit(const std::string& text) {
  LogicalCircuit out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op)) continue;
    if (op[0] == '#') continue;
    LogicalGate g{};
    if (op == "H") {
      g.kind = LogicalGate::H;
      if (!(ls >> g.i)) throw std::invalid_argument("logical circuit: H needs an index");
    } else if (op == "T") {
      g.kind = LogicalGate::T;
      if (!(ls >> g.i)) throw std::invalid_argument("logical circuit: T needs an index");
    } else if (op == "CNOT") {
      g.kind = LogicalGate::CNOT;
      if (!(ls >> g.i >> g.j)) throw std::invalid_argument("logical circuit: CNOT needs two indices");
    } else if (op == "MEASZ") {
      g.kind = LogicalGate::MeasZ;
      if (!(ls >> g.i)) throw std::invalid_argument("logical circuit: MEASZ needs an index");
    } else {
      throw std::invalid_argument("logical circuit: unknown instruction " + op);
    }
    out.push_back(g);
  }
  return out;
}

/// Reference evolution on plain complex qubits (unitary part only).
inline ComplexState apply_logical_unitary(const ComplexState& s, const LogicalGate& g) {
  switch (g.kind) {
    case LogicalGate::H: return apply_gate(s, GateOp::h(g.i));
    case LogicalGate::CNOT: return apply_gate(s, GateOp::cnot(g.i, g.j));
    case LogicalGate::T: {
      Eigen::VectorXcd a = s.amp;
      uint64_t b = rebit_bit(s.n, g.i);
      std::complex<double> ph = std::exp(std::complex<double>(0, M_PI / 4));
      for (Eigen::Index k = 0; k < a.size(); ++k)
        if (uint64_t(k) & b) a(k) *= ph;
      return ComplexState(std::move(a), s.n);
    }
    case LogicalGate::MeasZ:
      throw std::invalid_argument("apply_logical_unitary: measurement is not unitary");
  }
  throw std::logic_error("unreachable");
}

// Execution log: every primitive the gadgets perform, for the whitelist audit.

struct ExecLogEntry {
  std::string op;      // CNOT, X, Z, MEASX, MEASZ, ANCILLA, DISCARD
  std::string gadget;  // provenance tag
  int i = 0;
  int j = 0;
  int outcome = 0;  // measurement bit, 0 for +1
  std::string detail;
};

inline nlohmann::json log_to_json(const std::vector<ExecLogEntry>& log) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : log) {
    nlohmann::json j;
    j["op"] = e.op;
    j["gadget"] = e.gadget;
    if (e.i) j["i"] = e.i;
    if (e.j) j["j"] = e.j;
    if (e.op == "MEASX" || e.op == "MEASZ") j["outcome"] = e.outcome;
    if (!e.detail.empty()) j["detail"] = e.detail;
    arr.push_back(j);
  }
  return arr;
}

/// Restricted-operation audit: CSS unitaries, X/Z-type single-rebit
/// measurements, and ancilla consumption only.
inline bool audit_whitelist(const std::vector<ExecLogEntry>& log) {
  for (const auto& e : log) {
    if (e.op == "CNOT" || e.op == "X" || e.op == "Z" || e.op == "MEASX" || e.op == "MEASZ" ||
        e.op == "ANCILLA" || e.op == "DISCARD")
      continue;
    return false;
  }
  return true;
}

namespace detail {

struct BranchFork {
  double p0;
};
struct DeadBranch {};

/// Measurement outcomes either come from an RNG or replay a forced prefix;
/// running past the prefix raises a fork so the caller can explore both arms.
struct OutcomeSource {
  Rng* rng = nullptr;
  const std::vector<int>* forced = nullptr;
  size_t at = 0;

  int choose(double p0) {
    if (forced) {
      if (at >= forced->size()) throw BranchFork{p0};
      int o = (*forced)[at++];
      if ((o == 0 ? p0 : 1.0 - p0) < 1e-12) throw DeadBranch{};
      return o;
    }
    return (rng->next_double() < p0) ? 0 : 1;
  }
};

}  // namespace detail

/// Encoded-circuit executor. The state lives on `total` rebits; data_pos maps
/// logical qubits to rebit positions, tracker_pos is the Re/Im rebit.
class Injector {
 public:
  Injector(const ComplexState& input, detail::OutcomeSource src)
      : state_(encode(input)), src_(src) {
    total_ = state_.n;
    for (int k = 1; k < total_; ++k) data_pos_.push_back(k);
    tracker_pos_ = total_;
  }

  const std::vector<ExecLogEntry>& log() const { return log_; }
  double path_prob() const { return path_prob_; }
  const std::vector<int>& meas_bits() const { return meas_bits_; }
  const DenseState& state() const { return state_; }

  ComplexState decoded() const { return decode_at(state_, data_pos_, tracker_pos_); }

  void run_gate(const LogicalGate& g) {
    switch (g.kind) {
      case LogicalGate::CNOT: gadget_cnot(g.i, g.j); break;
      case LogicalGate::H: gadget_h(g.i); break;
      case LogicalGate::T: gadget_t(g.i); break;
      case LogicalGate::MeasZ: gadget_meas_z(g.i); break;
    }
  }

  void run_circuit(const LogicalCircuit& c) {
    for (const auto& g : c) run_gate(g);
  }

  /// Logical Z outcomes (bits) observed so far, in circuit order.
  const std::vector<int>& logical_outcomes() const { return logical_outcomes_; }

  void gadget_cnot(int i, int j) {
    prim_cnot(data_pos_.at(size_t(i - 1)), data_pos_.at(size_t(j - 1)), "cnot");
  }

  void gadget_meas_z(int i) {
    int m = prim_meas_z(data_pos_.at(size_t(i - 1)), "measz");
    logical_outcomes_.push_back(m);
  }

  void gadget_h(int i) {
    int out = teleport_h(data_pos_.at(size_t(i - 1)), "h");
    data_pos_.at(size_t(i - 1)) = out;
  }

  /// Consume an encoded pi/8 ancilla: merge its block into ours, then inject
  /// the phase with a CNOT and a Z readout; the wrong branch is repaired by
  /// the encoded S correction.
  void gadget_t(int i) {
    auto [a_pos, ta_pos] = append_ancilla(AncillaKind::A, "t");
    int herald = merge_block(ta_pos, "t");
    if (a_pos > ta_pos) --a_pos;
    prim_cnot(data_pos_.at(size_t(i - 1)), a_pos, "t");
    int m = prim_meas_z(a_pos, "t");
    remove_rebit(a_pos, 1, m, "t");
    // Applied phase was T when herald == m, otherwise its inverse.
    if (herald != m) encoded_s(data_pos_.at(size_t(i - 1)), "t");
  }

 private:
  DenseState state_;
  detail::OutcomeSource src_;
  int total_ = 0;
  std::vector<int> data_pos_;
  int tracker_pos_ = 0;
  std::vector<ExecLogEntry> log_;
  std::vector<int> meas_bits_;
  std::vector<int> logical_outcomes_;
  double path_prob_ = 1.0;

  // Primitive whitelisted operations.

  void prim_cnot(int i, int j, const std::string& tag) {
    state_ = apply_gate(state_, GateOp::cnot(i, j));
    log_.push_back({"CNOT", tag, i, j, 0, ""});
  }
  void prim_x(int i, const std::string& tag) {
    state_ = apply_gate(state_, GateOp::x(i));
    log_.push_back({"X", tag, i, 0, 0, ""});
  }
  void prim_z(int i, const std::string& tag) {
    state_ = apply_gate(state_, GateOp::z(i));
    log_.push_back({"Z", tag, i, 0, 0, ""});
  }

  int prim_meas(int pos, bool x_type, const std::string& tag) {
    PhasePoint label = x_type ? PhasePoint(0, rebit_bit(total_, pos), total_)
                              : PhasePoint(rebit_bit(total_, pos), 0, total_);
    PauliOp p(label, +1);
    double ev = expectation(state_, p);
    double p0 = std::clamp(0.5 * (1.0 + ev), 0.0, 1.0);
    int m = src_.choose(p0);
    double prob = (m == 0) ? p0 : 1.0 - p0;
    if (prob < 1e-12) throw detail::DeadBranch{};
    path_prob_ *= prob;
    int s = (m == 0) ? +1 : -1;
    Eigen::VectorXd proj = 0.5 * (state_.amp + double(s) * apply_pauli_vec(state_.amp, p, total_));
    state_ = DenseState(proj / proj.norm(), total_);
    log_.push_back({x_type ? "MEASX" : "MEASZ", tag, pos, 0, m, ""});
    meas_bits_.push_back(m);
    return m;
  }
  int prim_meas_x(int pos, const std::string& tag) { return prim_meas(pos, true, tag); }
  int prim_meas_z(int pos, const std::string& tag) { return prim_meas(pos, false, tag); }

  /// Tensor an ancilla pair onto the end of the register. Returns the two new
  /// positions (data first, partner second).
  std::pair<int, int> append_ancilla(AncillaKind kind, const std::string& tag) {
    DenseState anc = ancilla(kind);
    Eigen::Index od = state_.amp.size(), ad = anc.amp.size();
    Eigen::VectorXd merged(od * ad);
    for (Eigen::Index a = 0; a < od; ++a)
      for (Eigen::Index b = 0; b < ad; ++b) merged(a * ad + b) = state_.amp(a) * anc.amp(b);
    total_ += 2;
    state_ = DenseState(std::move(merged), total_);
    log_.push_back({"ANCILLA", tag, 0, 0, 0, kind == AncillaKind::A ? "A" : "B"});
    return {total_ - 1, total_};
  }

  /// Drop a rebit that a measurement just left in a product state.
  /// basis 0 = X eigenstate, 1 = Z eigenstate; m is the recorded outcome bit.
  void remove_rebit(int pos, int basis, int m, const std::string& tag) {
    uint64_t bit = rebit_bit(total_, pos);
    Eigen::Index nd = state_.amp.size() / 2;
    Eigen::VectorXd out(nd);
    Eigen::Index at = 0;
    for (Eigen::Index idx = 0; idx < state_.amp.size(); ++idx) {
      if (uint64_t(idx) & bit) continue;
      double v;
      if (basis == 1) {
        v = state_.amp(Eigen::Index(uint64_t(idx) | (m ? bit : 0)));
      } else {
        v = std::sqrt(2.0) * state_.amp(idx);
      }
      out(at++) = v;
    }
    out /= out.norm();
    --total_;
    state_ = DenseState(std::move(out), total_);
    log_.push_back({"DISCARD", tag, pos, 0, 0, ""});
    for (auto& p : data_pos_)
      if (p > pos) --p;
    if (tracker_pos_ > pos) --tracker_pos_;
  }

  /// Teleported single-rebit Hadamard through a |B> pair; returns the new
  /// position holding the output.
  int teleport_h(int d, const std::string& tag) {
    auto [a1, a2] = append_ancilla(AncillaKind::B, tag);
    prim_cnot(d, a1, tag);
    int m1 = prim_meas_x(d, tag);
    int m2 = prim_meas_z(a1, tag);
    if (m2) prim_z(a2, tag);
    if (m1) prim_x(a2, tag);
    // Remove a1 first so the position of d stays valid, then d.
    remove_rebit(a1, 1, m2, tag);
    int d_adj = d;  // d < a1 always, unaffected by the removal
    remove_rebit(d_adj, 0, m1, tag);
    int out = a2 - 2;  // a2 shifted down by the two removals before it? see below
    // a1 and d are both below a2, so a2 moved down by exactly 2.
    return out;
  }

  /// CZ between two rebits out of Hadamards on the second and a CNOT.
  /// Returns the (possibly moved) position of rebit j.
  int cz_via_h(int i, int j, const std::string& tag) {
    int jp = teleport_h(j, tag);
    int ip = i;  // i may shift when rebits below it are removed inside teleport_h
    // teleport_h removes the original j and one ancilla; recompute i's shift.
    if (i > j) ip = i - 1;  // original j removed below i; the ancilla removals are above data
    prim_cnot(ip, jp, tag);
    int jpp = teleport_h(jp, tag);
    return jpp;
  }

  /// Encoded S on logical rebit at position p: controlled multiplication of
  /// the tracked imaginary unit.
  void encoded_s(int p, const std::string& tag) {
    int new_tracker = cz_via_h(p, tracker_pos_, tag);
    tracker_pos_ = new_tracker;
    prim_cnot(p, tracker_pos_, tag);
  }

  /// Merge the block whose tracker sits at position ta into the main block.
  /// Returns the herald bit: 0 keeps the ancilla state, 1 conjugates it.
  int merge_block(int ta, const std::string& tag) {
    int new_ta = cz_via_h(tracker_pos_, ta, tag);
    prim_cnot(new_ta, tracker_pos_, tag);
    int herald = prim_meas_x(new_ta, tag);
    remove_rebit(new_ta, 0, herald, tag);
    return herald;
  }

 public:
  int tracker_pos() const { return tracker_pos_; }
  const std::vector<int>& data_pos() const { return data_pos_; }
};

struct BranchOutcome {
  double prob;
  std::vector<int> meas_bits;
  std::vector<int> logical_outcomes;
  ComplexState decoded;
  std::vector<ExecLogEntry> log;
};

namespace detail {

inline void enumerate_rec(const LogicalCircuit& c, const ComplexState& input,
                          std::vector<int>& forced, std::vector<BranchOutcome>& out) {
  OutcomeSource src;
  src.forced = &forced;
  Injector inj(input, src);
  try {
    inj.run_circuit(c);
  } catch (const BranchFork&) {
    for (int o : {0, 1}) {
      forced.push_back(o);
      try {
        enumerate_rec(c, input, forced, out);
      } catch (const DeadBranch&) {
      }
      forced.pop_back();
    }
    return;
  }
  out.push_back({inj.path_prob(), inj.meas_bits(), inj.logical_outcomes(), inj.decoded(),
                 inj.log()});
}

}  // namespace detail

/// All measurement branches of the encoded execution, with probabilities.
inline std::vector<BranchOutcome> run_encoded_branches(const LogicalCircuit& c,
                                                       const ComplexState& input) {
  std::vector<int> forced;
  std::vector<BranchOutcome> out;
  try {
    detail::enumerate_rec(c, input, forced, out);
  } catch (const detail::DeadBranch&) {
  }
  return out;
}

/// Single sampled execution.
inline BranchOutcome run_encoded(const LogicalCircuit& c, const ComplexState& input,
                                 uint64_t seed) {
  Rng rng(seed);
  detail::OutcomeSource src;
  src.rng = &rng;
  Injector inj(input, src);
  inj.run_circuit(c);
  return {inj.path_prob(), inj.meas_bits(), inj.logical_outcomes(), inj.decoded(), inj.log()};
}

inline double fidelity_up_to_phase(const ComplexState& a, const ComplexState& b) {
  return std::abs(a.amp.dot(b.amp));
}

}  // namespace rebit

#endif  // REBIT_INJECTION_HPP

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

#ifndef REBIT_DENSE_HPP
#define REBIT_DENSE_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "rebit/pauli.hpp"
#include "rebit/rng.hpp"

namespace rebit {

// Public operations cap out at 6 rebits; the two extra slots are headroom for
// transient gadget ancillas in the injection executor.
constexpr int kDenseCap = 8;
constexpr double kNormTol = 1e-10;

inline void check_dense_n(int n) {
  if (n < 1 || n > kDenseCap) throw std::invalid_argument("dense backend: n out of range");
}

/// Basis-state bit of rebit i (1-based, rebit 1 most significant).
inline uint64_t rebit_bit(int n, int i) { return bit_for_coord(n, i); }

/// Exact real state vector; the ground truth for everything at n <= 6.
struct DenseState {
  Eigen::VectorXd amp;
  int n = 0;

  DenseState() = default;
  DenseState(Eigen::VectorXd a, int n_) : amp(std::move(a)), n(n_) {
    check_dense_n(n_);
    if (amp.size() != (Eigen::Index(1) << n_))
      throw std::invalid_argument("DenseState: wrong amplitude count");
    if (std::abs(amp.norm() - 1.0) > kNormTol)
      throw std::invalid_argument("DenseState: not normalized");
  }

  static DenseState basis(int n_, uint64_t idx) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(Eigen::Index(1) << n_);
    a(Eigen::Index(idx)) = 1.0;
    return DenseState(std::move(a), n_);
  }
};

/// Complex state vector, used only to validate the injection scheme against
/// plain qubit evolution.
struct ComplexState {
  Eigen::VectorXcd amp;
  int n = 0;

  ComplexState() = default;
  ComplexState(Eigen::VectorXcd a, int n_) : amp(std::move(a)), n(n_) {
    check_dense_n(n_);
    if (amp.size() != (Eigen::Index(1) << n_))
      throw std::invalid_argument("ComplexState: wrong amplitude count");
    if (std::abs(amp.norm() - 1.0) > kNormTol)
      throw std::invalid_argument("ComplexState: not normalized");
  }
};

struct DenseDensity {
  Eigen::MatrixXd mat;
  int n = 0;

  DenseDensity() = default;
  DenseDensity(Eigen::MatrixXd m, int n_) : mat(std::move(m)), n(n_) {
    check_dense_n(n_);
    Eigen::Index d = Eigen::Index(1) << n_;
    if (mat.rows() != d || mat.cols() != d)
      throw std::invalid_argument("DenseDensity: wrong dimension");
    if ((mat - mat.transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("DenseDensity: not symmetric");
    if (std::abs(mat.trace() - 1.0) > 1e-10)
      throw std::invalid_argument("DenseDensity: trace not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
      throw std::invalid_argument("DenseDensity: not positive semidefinite");
  }

  static DenseDensity pure(const DenseState& psi) {
    return DenseDensity(psi.amp * psi.amp.transpose(), psi.n);
  }
  static DenseDensity maximally_mixed(int n_) {
    Eigen::Index d = Eigen::Index(1) << n_;
    return DenseDensity(Eigen::MatrixXd::Identity(d, d) / double(d), n_);
  }
};

struct GateOp {
  enum Kind { CNOT, H, H_all, X, Z, CZ, RZ } kind;
  int i = 0;  // 1-based rebit indices
  int j = 0;
  double theta = 0.0;

  static GateOp cnot(int i, int j) { return {CNOT, i, j, 0.0}; }
  static GateOp h(int i) { return {H, i, 0, 0.0}; }
  static GateOp h_all() { return {H_all, 0, 0, 0.0}; }
  static GateOp x(int i) { return {X, i, 0, 0.0}; }
  static GateOp z(int i) { return {Z, i, 0, 0.0}; }
  static GateOp cz(int i, int j) { return {CZ, i, j, 0.0}; }
  static GateOp rz(int i, double theta) { return {RZ, i, 0, theta}; }
};

namespace detail {

template <typename Vec>
void apply_gate_vec(Vec& a, int n, const GateOp& g) {
  using Scalar = typename Vec::Scalar;
  Eigen::Index dim = a.size();
  auto check_idx = [n](int i) {
    if (i < 1 || i > n) throw std::out_of_range("apply_gate: rebit index out of range");
  };
  switch (g.kind) {
    case GateOp::X: {
      check_idx(g.i);
      uint64_t b = rebit_bit(n, g.i);
      for (Eigen::Index k = 0; k < dim; ++k)
        if (!(k & Eigen::Index(b))) std::swap(a(k), a(k | Eigen::Index(b)));
      break;
    }
    case GateOp::Z: {
      check_idx(g.i);
      uint64_t b = rebit_bit(n, g.i);
      for (Eigen::Index k = 0; k < dim; ++k)
        if (k & Eigen::Index(b)) a(k) = -a(k);
      break;
    }
    case GateOp::CNOT: {
      check_idx(g.i);
      check_idx(g.j);
      if (g.i == g.j) throw std::invalid_argument("apply_gate: CNOT needs distinct rebits");
      uint64_t bc = rebit_bit(n, g.i), bt = rebit_bit(n, g.j);
      for (Eigen::Index k = 0; k < dim; ++k)
        if ((k & Eigen::Index(bc)) && !(k & Eigen::Index(bt)))
          std::swap(a(k), a(k | Eigen::Index(bt)));
      break;
    }
    case GateOp::CZ: {
      check_idx(g.i);
      check_idx(g.j);
      uint64_t bi = rebit_bit(n, g.i), bj = rebit_bit(n, g.j);
      for (Eigen::Index k = 0; k < dim; ++k)
        if ((k & Eigen::Index(bi)) && (k & Eigen::Index(bj))) a(k) = -a(k);
      break;
    }
    case GateOp::H: {
      check_idx(g.i);
      uint64_t b = rebit_bit(n, g.i);
      const double s = 1.0 / std::sqrt(2.0);
      for (Eigen::Index k = 0; k < dim; ++k)
        if (!(k & Eigen::Index(b))) {
          Scalar lo = a(k), hi = a(k | Eigen::Index(b));
          a(k) = Scalar(s) * (lo + hi);
          a(k | Eigen::Index(b)) = Scalar(s) * (lo - hi);
        }
      break;
    }
    case GateOp::H_all: {
      for (int i = 1; i <= n; ++i) apply_gate_vec(a, n, GateOp::h(i));
      break;
    }
    case GateOp::RZ: {
      check_idx(g.i);
      uint64_t b = rebit_bit(n, g.i);
      if constexpr (std::is_same_v<Scalar, double>) {
        // Real mode only supports theta in {0, pi}: exp(i pi Z) = -I.
        double t = std::fmod(std::abs(g.theta), 2 * M_PI);
        if (std::abs(t) > 1e-12 && std::abs(t - M_PI) > 1e-12)
          throw std::invalid_argument("apply_gate: RZ angle not real-representable");
        if (std::abs(t - M_PI) <= 1e-12) a = -a;
      } else {
        Scalar up = std::exp(Scalar(0, 1) * g.theta);
        Scalar dn = std::exp(Scalar(0, -1) * g.theta);
        for (Eigen::Index k = 0; k < dim; ++k) a(k) *= (k & Eigen::Index(b)) ? dn : up;
      }
      break;
    }
  }
}

}  // namespace detail

inline DenseState apply_gate(const DenseState& s, const GateOp& g) {
  Eigen::VectorXd a = s.amp;
  detail::apply_gate_vec(a, s.n, g);
  return DenseState(std::move(a), s.n);
}

inline ComplexState apply_gate(const ComplexState& s, const GateOp& g) {
  Eigen::VectorXcd a = s.amp;
  detail::apply_gate_vec(a, s.n, g);
  return ComplexState(std::move(a), s.n);
}

inline DenseDensity apply_gate(const DenseDensity& rho, const GateOp& g) {
  Eigen::MatrixXd m = rho.mat;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Eigen::VectorXd col = m.col(c);
    detail::apply_gate_vec(col, rho.n, g);
    m.col(c) = col;
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Eigen::VectorXd row = m.row(r).transpose();
    detail::apply_gate_vec(row, rho.n, g);
    m.row(r) = row.transpose();
  }
  return DenseDensity(std::move(m), rho.n);
}

/// Tr(rho sign T_a) without forming the matrix:
/// Tr(T_a rho) = sum_w (-1)^{a_Z . w} rho(w + a_X, w).
inline double expectation(const DenseDensity& rho, const PauliOp& p) {
  if (p.n() != rho.n) throw std::invalid_argument("expectation: size mismatch");
  double acc = 0;
  Eigen::Index dim = rho.mat.rows();
  for (Eigen::Index w = 0; w < dim; ++w) {
    double v = rho.mat(Eigen::Index(uint64_t(w) ^ p.point.x), w);
    acc += parity64(p.point.z & uint64_t(w)) ? -v : v;
  }
  return double(p.sign) * acc;
}

inline double expectation(const DenseState& psi, const PauliOp& p) {
  if (p.n() != psi.n) throw std::invalid_argument("expectation: size mismatch");
  double acc = 0;
  Eigen::Index dim = psi.amp.size();
  for (Eigen::Index w = 0; w < dim; ++w) {
    double v = psi.amp(Eigen::Index(uint64_t(w) ^ p.point.x)) * psi.amp(w);
    acc += parity64(p.point.z & uint64_t(w)) ? -v : v;
  }
  return double(p.sign) * acc;
}

/// Apply sign T_a to a state vector.
template <typename Vec>
inline Vec apply_pauli_vec(const Vec& a, const PauliOp& p, int n) {
  Vec out(a.size());
  for (Eigen::Index w = 0; w < a.size(); ++w) {
    Eigen::Index src = Eigen::Index(uint64_t(w) ^ p.point.x);
    // T_a |v> = (-1)^{a_Z . (v + a_X)} |v + a_X>, so row w draws from v = w + a_X.
    double s = parity64(p.point.z & uint64_t(w)) ? -1.0 : 1.0;
    out(w) = typename Vec::Scalar(double(p.sign) * s) * a(src);
  }
  return out;
}

struct MeasureResult {
  int outcome;  // +1 or -1
  DenseState post;
  double prob;  // probability of the reported outcome
};

/// Born-rule projective measurement of a symmetric sign T_a.
inline MeasureResult measure_pauli(const DenseState& psi, const PauliOp& p, Rng& rng) {
  if (!in_set_A(p.point)) throw std::invalid_argument("measure_pauli: operator not symmetric");
  double ev = expectation(psi, p);
  double p_plus = std::clamp(0.5 * (1.0 + ev), 0.0, 1.0);
  int s = (rng.next_double() < p_plus) ? +1 : -1;
  double prob = (s > 0) ? p_plus : 1.0 - p_plus;
  Eigen::VectorXd proj = 0.5 * (psi.amp + double(s) * apply_pauli_vec(psi.amp, p, psi.n));
  proj /= proj.norm();
  return {s, DenseState(std::move(proj), psi.n), prob};
}

/// Both measurement branches with their probabilities; empty entries for
/// zero-probability outcomes.
struct MeasureBranch {
  int outcome;
  double prob;
  DenseState post;
};

inline std::vector<MeasureBranch> measure_branches(const DenseState& psi, const PauliOp& p) {
  std::vector<MeasureBranch> out;
  double ev = expectation(psi, p);
  for (int s : {+1, -1}) {
    double prob = std::clamp(0.5 * (1.0 + s * ev), 0.0, 1.0);
    if (prob < 1e-14) continue;
    Eigen::VectorXd proj = 0.5 * (psi.amp + double(s) * apply_pauli_vec(psi.amp, p, psi.n));
    proj /= proj.norm();
    out.push_back({s, prob, DenseState(std::move(proj), psi.n)});
  }
  return out;
}

inline bool is_rebit(const ComplexState& s) {
  for (Eigen::Index k = 0; k < s.amp.size(); ++k)
    if (std::abs(s.amp(k).imag()) >= 1e-12) return false;
  return true;
}

inline bool is_rebit(const DenseState&) { return true; }

inline bool is_rebit(const Eigen::MatrixXcd& rho) {
  for (Eigen::Index r = 0; r < rho.rows(); ++r)
    for (Eigen::Index c = 0; c < rho.cols(); ++c)
      if (std::abs(rho(r, c).imag()) >= 1e-12) return false;
  Eigen::MatrixXd re = rho.real();
  if ((re - re.transpose()).cwiseAbs().maxCoeff() > 1e-10) return false;
  if (std::abs(re.trace() - 1.0) > 1e-10) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(re, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -1e-9;
}

// Random test-state helpers.

inline DenseState random_real_state(int n, Rng& rng) {
  Eigen::Index d = Eigen::Index(1) << n;
  Eigen::VectorXd a(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    // Box-Muller normal deviates give a Haar-uniform real direction.
    double u1 = std::max(rng.next_double(), 1e-300);
    double u2 = rng.next_double();
    a(k) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2 * M_PI * u2);
  }
  a /= a.norm();
  return DenseState(std::move(a), n);
}

inline ComplexState random_complex_state(int n, Rng& rng) {
  Eigen::Index d = Eigen::Index(1) << n;
  Eigen::VectorXcd a(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    double u1 = std::max(rng.next_double(), 1e-300);
    double u2 = rng.next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    a(k) = std::complex<double>(r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2));
  }
  a /= a.norm();
  return ComplexState(std::move(a), n);
}

inline DenseDensity random_rebit_density(int n, Rng& rng, int mixture = 4) {
  Eigen::Index d = Eigen::Index(1) << n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  std::vector<double> w(mixture);
  double tot = 0;
  for (auto& wi : w) {
    wi = rng.next_double() + 1e-6;
    tot += wi;
  }
  for (int k = 0; k < mixture; ++k) {
    DenseState s = random_real_state(n, rng);
    m += (w[k] / tot) * (s.amp * s.amp.transpose());
  }
  return DenseDensity(std::move(m), n);
}

// JSON round-trip of states and densities (row-major entries).

inline nlohmann::json to_json(const DenseState& s) {
  nlohmann::json j;
  j["n"] = s.n;
  j["amplitudes"] = std::vector<double>(s.amp.data(), s.amp.data() + s.amp.size());
  return j;
}

inline nlohmann::json to_json(const DenseDensity& rho) {
  nlohmann::json j;
  j["n"] = rho.n;
  std::vector<double> entries;
  entries.reserve(size_t(rho.mat.size()));
  for (Eigen::Index r = 0; r < rho.mat.rows(); ++r)
    for (Eigen::Index c = 0; c < rho.mat.cols(); ++c) entries.push_back(rho.mat(r, c));
  j["density"] = entries;
  return j;
}

inline DenseState state_from_json(const nlohmann::json& j) {
  int n = j.at("n").get<int>();
  auto v = j.at("amplitudes").get<std::vector<double>>();
  Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
  return DenseState(std::move(a), n);
}

inline DenseDensity density_from_json(const nlohmann::json& j) {
  int n = j.at("n").get<int>();
  auto v = j.at("density").get<std::vector<double>>();
  Eigen::Index d = Eigen::Index(1) << n;
  if (Eigen::Index(v.size()) != d * d) throw std::invalid_argument("density_from_json: wrong size");
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = v[size_t(r * d + c)];
  return DenseDensity(std::move(m), n);
}

}  // namespace rebit

#endif  // REBIT_DENSE_HPP

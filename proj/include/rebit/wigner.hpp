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

#ifndef REBIT_WIGNER_HPP
#define REBIT_WIGNER_HPP

#include <iomanip>
#include <sstream>

#include "rebit/dense.hpp"

namespace rebit {

/// Real quasiprobability table over all 4^n phase points, indexed by
/// u.index() = (u_Z << n) | u_X.
struct WignerTable {
  int n = 0;
  std::vector<double> values;

  WignerTable() = default;
  WignerTable(int n_, std::vector<double> v) : n(n_), values(std::move(v)) {
    if (values.size() != (size_t{1} << (2 * n_)))
      throw std::invalid_argument("WignerTable: wrong value count");
  }

  double at(const PhasePoint& u) const { return values[u.index()]; }
  double& at(const PhasePoint& u) { return values[u.index()]; }
  double sum() const {
    double s = 0;
    for (double v : values) s += v;
    return s;
  }
};

/// A_u = (1/2^n) sum over symmetric labels a of (-1)^{[u,a]} T_a.
inline Eigen::MatrixXd phase_point_operator(const PhasePoint& u, int n) {
  check_dense_n(n);
  Eigen::Index d = Eigen::Index(1) << n;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  uint64_t npoints = uint64_t{1} << (2 * n);
  for (uint64_t idx = 0; idx < npoints; ++idx) {
    PhasePoint a = PhasePoint::from_index(idx, n);
    if (!in_set_A(a)) continue;
    int sign = sym_inner(u, a) ? -1 : +1;
    acc += dense_matrix(PauliOp(a, sign));
  }
  return acc / double(d);
}

/// The symplectic character (-1)^{[u,a]} equals the euclidean character of u
/// against a with swapped halves, so the sum over labels is one butterfly on
/// the half-swapped expectation array.
inline WignerTable wigner_of_density(const DenseDensity& rho) {
  int n = rho.n;
  size_t npoints = size_t{1} << (2 * n);
  std::vector<double> arr(npoints);
  for (uint64_t b = 0; b < npoints; ++b) {
    PhasePoint a = PhasePoint::from_index(swap_halves(b, n), n);
    // Antisymmetric labels trace to zero against a symmetric matrix; skip.
    arr[b] = in_set_A(a) ? expectation(rho, PauliOp(a, +1)) : 0.0;
  }
  fwht(arr);
  double norm = 1.0 / double(npoints);
  for (double& v : arr) v *= norm;
  return WignerTable(n, std::move(arr));
}

/// Pure-state path: W(p, q) = (1/2^n) sum_x (-1)^{(p,x)} psi(q) psi(q+x),
/// one butterfly per q-slice.
inline WignerTable wigner_of_pure_fast(const DenseState& psi) {
  int n = psi.n;
  uint64_t dim = uint64_t{1} << n;
  std::vector<double> table(dim * dim);
  std::vector<double> slice(dim);
  for (uint64_t q = 0; q < dim; ++q) {
    for (uint64_t x = 0; x < dim; ++x)
      slice[x] = psi.amp(Eigen::Index(q)) * psi.amp(Eigen::Index(q ^ x));
    fwht(slice);
    for (uint64_t p = 0; p < dim; ++p) table[(p << n) | q] = slice[p] / double(dim);
  }
  return WignerTable(n, std::move(table));
}

/// rho = sum_u W(u) A_u, assembled label-wise: the coefficient of T_a is the
/// character sum of W, again one butterfly.
inline DenseDensity reconstruct(const WignerTable& w) {
  int n = w.n;
  check_dense_n(n);
  size_t npoints = w.values.size();
  std::vector<double> coef = w.values;
  fwht(coef);  // coef[k] = sum_u (-1)^{k.u} W(u)
  Eigen::Index d = Eigen::Index(1) << n;
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(d, d);
  double norm = 1.0 / double(d);
  for (uint64_t idx = 0; idx < npoints; ++idx) {
    PhasePoint a = PhasePoint::from_index(idx, n);
    if (!in_set_A(a)) continue;
    double c = norm * coef[swap_halves(idx, n)];
    if (c == 0.0) continue;
    // Add c * T_a through its sparse action.
    for (uint64_t wcol = 0; wcol < uint64_t(d); ++wcol) {
      double s = parity64(a.z & (wcol ^ a.x)) ? -1.0 : 1.0;
      rho(Eigen::Index(wcol ^ a.x), Eigen::Index(wcol)) += c * s;
    }
  }
  return DenseDensity(std::move(rho), n);
}

inline double trace_inner(const WignerTable& wa, const WignerTable& wb) {
  if (wa.n != wb.n) throw std::invalid_argument("trace_inner: size mismatch");
  double s = 0;
  for (size_t i = 0; i < wa.values.size(); ++i) s += wa.values[i] * wb.values[i];
  return double(uint64_t{1} << wa.n) * s;
}

struct NegativityReport {
  double min_value;
  double neg_mass;
  bool is_nonnegative;
};

inline NegativityReport negativity(const WignerTable& w) {
  double mn = w.values.empty() ? 0.0 : w.values[0];
  double mass = 0;
  for (double v : w.values) {
    mn = std::min(mn, v);
    if (v < 0) mass += -v;
  }
  return {mn, mass, mn >= -1e-10};
}

/// Tensor-product factorization W_ab(u_A, u_B) = W_a(u_A) W_b(u_B), where the
/// A factor holds the leading rebits.
inline bool product_check(const WignerTable& wa, const WignerTable& wb, const WignerTable& wab,
                          double tol = 1e-10) {
  if (wab.n != wa.n + wb.n) throw std::invalid_argument("product_check: size mismatch");
  int na = wa.n, nb = wb.n, n = wab.n;
  for (uint64_t ia = 0; ia < wa.values.size(); ++ia)
    for (uint64_t ib = 0; ib < wb.values.size(); ++ib) {
      PhasePoint ua = PhasePoint::from_index(ia, na);
      PhasePoint ub = PhasePoint::from_index(ib, nb);
      PhasePoint u((ua.z << nb) | ub.z, (ua.x << nb) | ub.x, n);
      if (std::abs(wab.at(u) - wa.values[ia] * wb.values[ib]) > tol) return false;
    }
  return true;
}

inline std::string wigner_to_csv(const WignerTable& w) {
  std::ostringstream os;
  os << "u_Z,u_X,value\n" << std::setprecision(17);
  for (uint64_t idx = 0; idx < w.values.size(); ++idx) {
    PhasePoint u = PhasePoint::from_index(idx, w.n);
    os << u.z_part().to_string() << ',' << u.x_part().to_string() << ',' << w.values[idx] << '\n';
  }
  return os.str();
}

inline nlohmann::json wigner_to_json(const WignerTable& w) {
  nlohmann::json j;
  j["n"] = w.n;
  j["values"] = w.values;
  return j;
}

inline WignerTable wigner_from_json(const nlohmann::json& j) {
  return WignerTable(j.at("n").get<int>(), j.at("values").get<std::vector<double>>());
}

}  // namespace rebit

#endif  // REBIT_WIGNER_HPP

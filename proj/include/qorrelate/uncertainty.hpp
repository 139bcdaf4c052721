// Copyright 2026 The qorrelate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QORRELATE_UNCERTAINTY_HPP
#define QORRELATE_UNCERTAINTY_HPP

#include <qorrelate/matkernel.hpp>
#include <qorrelate/measurement.hpp>
#include <qorrelate/optimize.hpp>
#include <qorrelate/qstate.hpp>

#include <optional>
#include <string>
#include <vector>

namespace qorrelate {

inline double variance(const ComplexMatrix& rho, const ComplexMatrix& x, const Tolerance& tol = {}) {
  require_hermitian(x, tol, "observable");
  if (x.rows() != rho.rows()) throw Error(ErrorCode::DimensionMismatch, "state and observable dimensions differ");
  const ComplexMatrix rx = rho * x;
  const double m1 = rx.trace().real();
  const double m2 = trace_product(rx, x).real();
  return std::max(m2 - m1 * m1, 0.0);
}

inline double variance(const DensityMatrix& rho, const ComplexMatrix& x, const Tolerance& tol = {}) {
  return variance(rho.mat(), x, tol);
}

inline double vsum(const ComplexMatrix& rho, const std::vector<ComplexMatrix>& xs, const Tolerance& tol = {}) {
  double s = 0.0;
  for (const auto& x : xs) s += variance(rho, x, tol);
  return s;
}

inline double vsum(const DensityMatrix& rho, const Measurement& x, const Tolerance& tol = {}) {
  if (rho.dim() != x.dim()) throw Error(ErrorCode::DimensionMismatch, "state and measurement dimensions differ");
  return vsum(rho.mat(), x.observables(), tol);
}

/// Observables X_mu^A (x) 1 + 1 (x) X_mu^B.
inline std::vector<ComplexMatrix> joint_observables(const Measurement& xa, const Measurement& xb) {
  if (xa.size() != xb.size()) throw Error(ErrorCode::DimensionMismatch, "measurements differ in size");
  const ComplexMatrix ia = ComplexMatrix::Identity(xa.dim(), xa.dim());
  const ComplexMatrix ib = ComplexMatrix::Identity(xb.dim(), xb.dim());
  std::vector<ComplexMatrix> out;
  for (int mu = 0; mu < xa.size(); ++mu) out.push_back(kron(xa[mu], ib) + kron(ia, xb[mu]));
  return out;
}

struct CasimirData {
  RealMatrix n;           // sum_mu nhat_mu nhat_mu^T
  ComplexMatrix cprime;   // sum_kl N_kl pi_k pi_l
  double eq23_residual = 0.0;
};

/// Splits sum X_mu^2 into sum t_mu^2/d^2 1 + (2/d) sum t_mu nhat_mu.pi + C',
/// with t_mu = Tr[X_mu]; the residual of that identity is recorded.
inline CasimirData casimir(const Measurement& x) {
  const SuBasis& b = cached_basis(x.dim());
  const int d = x.dim();
  const RealMatrix nh = x.nhat();
  CasimirData c;
  c.n = nh.transpose() * nh;
  c.cprime = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < c.n.rows(); ++k)
    for (int l = 0; l < c.n.cols(); ++l)
      if (c.n(k, l) != 0.0) c.cprime += c.n(k, l) * (b.generators[k] * b.generators[l]);

  ComplexMatrix lhs = ComplexMatrix::Zero(d, d);
  ComplexMatrix rhs = c.cprime;
  for (int mu = 0; mu < x.size(); ++mu) {
    lhs += x[mu] * x[mu];
    const double t = std::sqrt(2.0 * d) * x.coeffs()(mu, 0);
    rhs += (t * t / (d * d)) * ComplexMatrix::Identity(d, d);
    rhs += (2.0 * t / d) * assemble_traceless(nh.row(mu).transpose(), b);
  }
  c.eq23_residual = max_abs((lhs - rhs).eval());
  return c;
}

struct UncertaintyBound {
  double value = 0.0;
  // closed_form_dichotomy | closed_form_qubit | closed_form_scm |
  // closed_form_tight_frame | numeric_min
  std::string method;
  bool certified = true;  // false: numeric value is an upper bound on the minimum
  std::optional<ComplexVector> certificate;
};

struct UncertaintyOptions {
  bool force_numeric = false;
  MultiStartOptions search{128, 0, 2000, 1e-15};
};

inline UncertaintyBound uncertainty_bound_numeric(const Measurement& x, const MultiStartOptions& opt) {
  const int d = x.dim();
  ComplexMatrix q = ComplexMatrix::Zero(d, d);
  for (const auto& o : x.observables()) q += o * o;
  const PureStateOptimum r = minimize_variance_form(x.observables(), q, opt);
  UncertaintyBound out;
  out.value = std::max(r.value, 0.0);
  out.method = "numeric_min";
  out.certified = false;
  out.certificate = r.state;
  return out;
}

/// S = min over states of V(rho, X). Closed forms, in dispatch order:
///   qubit traceless:   tr N - lambda_max(N)  (alpha^2 (1 - |cos theta|) for a dichotomy)
///   SCM:               2 d^2 alpha^2 / (d+1)
///   tight frame:       2 c (d-1) when N_full has zero (0,k) block and N = c 1
/// otherwise a multi-start minimization over pure states.
inline UncertaintyBound uncertainty_bound(const Measurement& x, const UncertaintyOptions& opt = {}) {
  if (opt.force_numeric) return uncertainty_bound_numeric(x, opt.search);
  const int d = x.dim();
  const RealMatrix nh = x.nhat();
  const RealMatrix n = nh.transpose() * nh;
  if (d == 2 && x.flags().traceless) {
    const double v = std::max(n.trace() - symmetric_eigenvalues(n)(0), 0.0);
    return {v, x.size() == 2 ? "closed_form_dichotomy" : "closed_form_qubit", true, std::nullopt};
  }
  if (const auto p = scm_parameters(x)) {
    return {2.0 * d * d * p->alpha * p->alpha / (d + 1.0), "closed_form_scm", true, std::nullopt};
  }
  const RealMatrix nf = x.coeffs().transpose() * x.coeffs();
  const int k = d * d - 1;
  const double scale = std::max(1.0, max_abs(nf));
  const double c = n.trace() / k;
  const bool cross_zero = max_abs(nf.row(0).tail(k).eval()) <= 1e-12 * scale;
  const bool iso = max_abs((n - c * RealMatrix::Identity(k, k)).eval()) <= 1e-12 * scale;
  if (cross_zero && iso) return {2.0 * c * (d - 1.0), "closed_form_tight_frame", true, std::nullopt};
  return uncertainty_bound_numeric(x, opt.search);
}

struct ScmVsumIdentity {
  double lhs = 0.0;       // V(rho, X), direct
  double rhs = 0.0;       // 2 d^2 (d - Tr rho^2) alpha^2 / (d^2 - 1)
  double residual = 0.0;
  double lower = 0.0;     // 2 d^2 alpha^2 / (d+1)
  double upper = 0.0;     // 2 d alpha^2
  bool sandwich_holds = false;
};

inline ScmVsumIdentity scm_vsum_identity(const DensityMatrix& rho, const Measurement& x) {
  const auto p = scm_parameters(x);
  if (!p) throw Error(ErrorCode::NotSCM, "measurement is not a symmetric complete measurement");
  const int d = x.dim();
  const double a2 = p->alpha * p->alpha;
  ScmVsumIdentity r;
  r.lhs = vsum(rho, x);
  r.rhs = 2.0 * d * d * (d - purity(rho)) * a2 / (d * d - 1.0);
  r.residual = std::abs(r.lhs - r.rhs);
  r.lower = 2.0 * d * d * a2 / (d + 1.0);
  r.upper = 2.0 * d * a2;
  const double slack = 1e-10 * std::max(1.0, r.upper);
  r.sandwich_holds = r.lhs >= r.lower - slack && r.lhs <= r.upper + slack;
  return r;
}

struct QubitBlochForms {
  double commutator_rhs = 0.0;  // |<[X1,X2]>|^2 / 4 = |(n1 x n2).r|^2
  double schrodinger_rhs = 0.0;  // commutator_rhs + |n1.n2 - (n1.r)(n2.r)|^2
  double variance_product = 0.0;
  double commutator_direct = 0.0;   // same quantities from operator traces
  double schrodinger_direct = 0.0;
};

inline QubitBlochForms qubit_bloch_forms(const DensityMatrix& rho, const Eigen::Vector3d& n1,
                                         const Eigen::Vector3d& n2) {
  if (rho.dim() != 2 || rho.is_bipartite()) throw Error(ErrorCode::DimensionMismatch, "qubit state required");
  const SuBasis& b = cached_basis(2);
  const RealVector rv = to_bloch(rho, b);
  const Eigen::Vector3d r(rv(0), rv(1), rv(2));
  QubitBlochForms f;
  const double c = n1.cross(n2).dot(r);
  const double s = n1.dot(n2) - n1.dot(r) * n2.dot(r);
  f.commutator_rhs = c * c;
  f.schrodinger_rhs = c * c + s * s;

  const ComplexMatrix x1 = assemble_traceless(RealVector(n1), b);
  const ComplexMatrix x2 = assemble_traceless(RealVector(n2), b);
  const cplx comm = trace_product(rho.mat(), (x1 * x2 - x2 * x1).eval());
  const double anti = 0.5 * trace_product(rho.mat(), (x1 * x2 + x2 * x1).eval()).real();
  const double m1 = expectation(rho.mat(), x1);
  const double m2 = expectation(rho.mat(), x2);
  f.commutator_direct = std::norm(comm) / 4.0;
  f.schrodinger_direct = f.commutator_direct + (anti - m1 * m2) * (anti - m1 * m2);
  f.variance_product = variance(rho, x1) * variance(rho, x2);
  return f;
}

struct ProductNullWitness {
  Eigen::Vector3d bloch;
  double variance_product = 0.0;
  double schrodinger_rhs = 0.0;
};

/// A state with V(X1) V(X2) = 0 for the dichotomy at angle theta (the
/// eigenstate of X1), showing the product has no positive state-independent
/// lower bound.
inline ProductNullWitness variance_product_null_state(double theta) {
  const Eigen::Vector3d n1(1.0, 0.0, 0.0);
  const Eigen::Vector3d n2(std::cos(theta), std::sin(theta), 0.0);
  const SuBasis& b = cached_basis(2);
  const DensityMatrix rho = from_bloch(RealVector(n1), b);
  const QubitBlochForms f = qubit_bloch_forms(rho, n1, n2);
  return {n1, f.variance_product, f.schrodinger_rhs};
}

}  // namespace qorrelate

#endif  // QORRELATE_UNCERTAINTY_HPP

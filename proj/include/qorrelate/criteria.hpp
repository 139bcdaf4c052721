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

#ifndef QORRELATE_CRITERIA_HPP
#define QORRELATE_CRITERIA_HPP

#include <qorrelate/matkernel.hpp>
#include <qorrelate/measurement.hpp>
#include <qorrelate/qstate.hpp>
#include <qorrelate/uncertainty.hpp>

#include <atomic>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qorrelate {

// ---------------------------------------------------------------------------
// Correlation matrices

struct CorrelationMatrices {
  RealMatrix C;      // <X_mu^A (x) X_nu^B>
  RealMatrix gamma;  // <X_mu^A><X_nu^B> - C_mu_nu
  RealVector xa;
  RealVector xb;
  bool cross_checked = false;
  double cross_residual = 0.0;
};

enum class CrossCheck { Auto, Always, Never };

namespace detail {

// Column mu holds X_mu(j, i) at row i*d + j.
inline ComplexMatrix vec_transposed(const Measurement& x) {
  const int d = x.dim();
  ComplexMatrix p(d * d, x.size());
  for (int mu = 0; mu < x.size(); ++mu)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) p(i * d + j, mu) = x[mu](j, i);
  return p;
}

inline bool sample_cross_check(CrossCheck mode) {
  if (mode == CrossCheck::Always) return true;
  if (mode == CrossCheck::Never) return false;
#ifdef NDEBUG
  static std::atomic<unsigned> calls{0};
  return calls.fetch_add(1, std::memory_order_relaxed) % 16 == 0;
#else
  return true;
#endif
}

inline void require_pair(const DensityMatrix& rho, const Measurement& xa, const Measurement& xb) {
  if (!rho.is_bipartite()) throw Error(ErrorCode::InvalidInput, "bipartite state required");
  if (xa.size() != xb.size()) throw Error(ErrorCode::DimensionMismatch, "measurements differ in size m");
  if (xa.dim() != rho.dim_a() || xb.dim() != rho.dim_b()) {
    throw Error(ErrorCode::DimensionMismatch, "measurement dimensions differ from the state's factors");
  }
}

}  // namespace detail

/// C_mu_nu = Tr[rho X_mu^A (x) X_nu^B] evaluated as P_A^T R(rho) P_B with R the
/// realignment. The chi path C = M_A^T chi M_B, gamma = M_A^T (chi' - chi) M_B
/// is compared against it (always in debug builds, every 16th call otherwise).
inline CorrelationMatrices correlations(const DensityMatrix& rho, const Measurement& xa, const Measurement& xb,
                                        CrossCheck mode = CrossCheck::Auto) {
  detail::require_pair(rho, xa, xb);
  const ComplexMatrix r = realign(rho.mat(), rho.dim_a(), rho.dim_b());
  CorrelationMatrices out;
  out.C = (detail::vec_transposed(xa).transpose() * r * detail::vec_transposed(xb)).real();
  out.xa = expectation_vector(rho.marginal(Subsystem::A), xa);
  out.xb = expectation_vector(rho.marginal(Subsystem::B), xb);
  out.gamma = out.xa * out.xb.transpose() - out.C;

  if (rho.dim_a() == rho.dim_b() && detail::sample_cross_check(mode)) {
    const ChiMatrix chi = chi_matrix(rho);
    const RealMatrix ma = xa.coefficient_columns();
    const RealMatrix mb = xb.coefficient_columns();
    const RealMatrix c2 = ma.transpose() * chi.chi * mb;
    const RealMatrix g2 = ma.transpose() * (chi.chi_prime() - chi.chi) * mb;
    out.cross_residual = std::max(max_abs((c2 - out.C).eval()), max_abs((g2 - out.gamma).eval()));
    out.cross_checked = true;
    const double scale = std::max(1.0, max_abs(out.C));
    if (out.cross_residual > 1e-8 * scale) {
      throw Error(ErrorCode::InconsistentData,
                  "correlation paths disagree by " + std::to_string(out.cross_residual));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verdicts

using ParamValue = std::variant<bool, double, std::string>;

/// margin > detection_eps means detected. For <=-type criteria margin is
/// lhs - bound; for the variance (>=-type) forms it is bound - lhs.
struct CriterionVerdict {
  std::string criterion;
  double lhs = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool detected = false;
  double detection_eps = 1e-9;
  std::map<std::string, ParamValue> params;
  std::string notes;
};

struct CriterionOptions {
  double detection_eps = 1e-9;
  bool orbit_search = false;  // steering: minimize kappa_A over the orbit
  std::uint64_t seed = 0;
  UncertaintyOptions uncertainty;
  MultiStartOptions bx_search;
  Tolerance tol;
};

inline CriterionVerdict make_verdict(std::string id, double lhs, double bound, double eps, bool reversed = false) {
  CriterionVerdict v;
  v.criterion = std::move(id);
  v.lhs = lhs;
  v.bound = bound;
  v.margin = reversed ? bound - lhs : lhs - bound;
  v.detection_eps = eps;
  v.detected = v.margin > eps;
  return v;
}

inline void note(CriterionVerdict& v, const std::string& s) {
  if (!v.notes.empty()) v.notes += "; ";
  v.notes += s;
}

// ---------------------------------------------------------------------------
// Entanglement

/// ||C||_tr <= kappa_A kappa_B, kappa = max |x| over B(X).
inline CriterionVerdict ent_criterion_C(const DensityMatrix& rho, const Measurement& xa, const Measurement& xb,
                                        const CriterionOptions& opt = {}) {
  const CorrelationMatrices c = correlations(rho, xa, xb);
  const BxNorm ka = max_bx_norm(xa, opt.bx_search);
  const BxNorm kb = max_bx_norm(xb, opt.bx_search);
  CriterionVerdict v = make_verdict("ent_C", trace_norm(c.C), ka.value * kb.value, opt.detection_eps);
  v.params["kappa_a"] = ka.value;
  v.params["kappa_b"] = kb.value;
  v.params["kappa_a_method"] = ka.method;
  v.params["kappa_b_method"] = kb.method;
  if (!ka.certified || !kb.certified) note(v, "kappa from numeric maximization is a lower bound");
  return v;
}

struct SideVariances {
  double va = 0.0, vb = 0.0;
  UncertaintyBound sa, sb;
};

inline SideVariances side_variances(const DensityMatrix& rho, const Measurement& xa, const Measurement& xb,
                                    const CriterionOptions& opt, bool need_sa = true) {
  SideVariances s;
  s.va = vsum(rho.marginal(Subsystem::A), xa);
  s.vb = vsum(rho.marginal(Subsystem::B), xb);
  if (need_sa) s.sa = uncertainty_bound(xa, opt.uncertainty);
  s.sb = uncertainty_bound(xb, opt.uncertainty);
  return s;
}

/// ||gamma||_tr <= ((V_A - S_A) + (V_B - S_B)) / 2.
inline CriterionVerdict ent_criterion_gamma(const DensityMatrix& rho, const Measurement& xa, const Measurement& xb,
                                            const CriterionOptions& opt = {}) {
  const CorrelationMatrices c = correlations(rho, xa, xb);
  const SideVariances s = side_variances(rho, xa, xb, opt);
  const double bound = ((s.va - s.sa.value) + (s.vb - s.sb.value)) / 2.0;
  CriterionVerdict v = make_verdict("ent_gamma", trace_norm(c.gamma), bound, opt.detection_eps);
  v.params["V_a"] = s.va;
  v.params["V_b"] = s.vb;
  v.params["S_a"] = s.sa.value;
  v.params["S_b"] = s.sb.value;
  if (!s.sa.certified || !s.sb.certified) note(v, "S from numeric minimization is an upper bound");
  return v;
}

/// min over orbits of V(rho, X^A + X^B) = V_A + V_B - 2 ||gamma||_tr, compared
/// with S_A + S_B. The margin is twice the gamma-criterion margin, so the
/// threshold is 2 * detection_eps.
inline CriterionVerdict lur_criterion(const DensityMatrix& rho, const Measurement& xa, const Measurement& xb,
                                      const CriterionOptions& opt = {}) {
  const CorrelationMatrices c = correlations(rho, xa, xb);
  const SideVariances s = side_variances(rho, xa, xb, opt);
  const double joint = s.va + s.vb - 2.0 * trace_norm(c.gamma);
  CriterionVerdict v = make_verdict("lur", joint, s.sa.value + s.sb.value, 2.0 * opt.detection_eps, true);
  v.params["V_a"] = s.va;
  v.params["V_b"] = s.vb;
  v.params["S_a"] = s.sa.value;
  v.params["S_b"] = s.sb.value;
  return v;
}

/// W = kappa 1 - sum_mu X_mu^A (x) X_mu^B.
inline ComplexMatrix witness(const Measurement& xa, const Measurement& xb, double kappa) {
  if (xa.size() != xb.size()) throw Error(ErrorCode::DimensionMismatch, "measurements differ in size m");
  const int n = xa.dim() * xb.dim();
  ComplexMatrix w = kappa * ComplexMatrix::Identity(n, n);
  for (int mu = 0; mu < xa.size(); ++mu) w -= kron(xa[mu], xb[mu]);
  return w;
}

struct OptimalWitness {
  ComplexMatrix w;
  double expectation = 0.0;  // Tr[W rho] = kappa - ||C||_tr
  double kappa = 0.0;
  RealMatrix oa, ob;  // orbit rotations applied to X^A and X^B
};

/// Rotates X^A by U^T and X^B by V^T with C = U S V^T, so that
/// sum_mu <X'_mu^A (x) X'_mu^B> = ||C||_tr.
inline OptimalWitness optimal_witness(const DensityMatrix& rho, const Measurement& xa, const Measurement& xb,
                                      const CriterionOptions& opt = {}) {
  const CorrelationMatrices c = correlations(rho, xa, xb);
  const auto f = svd(c.C);
  OptimalWitness out;
  out.kappa = max_bx_norm(xa, opt.bx_search).value * max_bx_norm(xb, opt.bx_search).value;
  out.oa = f.u.transpose();
  out.ob = f.v.transpose();
  out.w = witness(apply_orbit(out.oa, xa), apply_orbit(out.ob, xb), out.kappa);
  out.expectation = expectation(rho.mat(), out.w);
  return out;
}

enum class NormalFormVariant { C_nf, gamma_nf };

/// C_nf: ||chi~||_tr <= 2(d-1)/d on the normal form of rho.
/// gamma_nf: ||chi' - chi||_tr <= 2 - Tr rho_A^2 - Tr rho_B^2 on rho as given.
inline CriterionVerdict normalform_criterion(const DensityMatrix& rho, NormalFormVariant variant,
                                             const CriterionOptions& opt = {}) {
  if (!rho.is_bipartite() || rho.dim_a() != rho.dim_b()) {
    throw Error(ErrorCode::DimensionMismatch, "normal-form criteria need equal local dimensions");
  }
  const int d = rho.dim_a();
  if (variant == NormalFormVariant::C_nf) {
    const double bound = 2.0 * (d - 1.0) / d;
    try {
      const NormalForm nf = normal_form(rho, opt.tol);
      const ChiMatrix chi = chi_matrix(nf.state);
      CriterionVerdict v = make_verdict("nf_C", trace_norm(chi.correlation_block()), bound, opt.detection_eps);
      v.params["iterations"] = static_cast<double>(nf.iterations);
      v.params["deviation"] = nf.deviation;
      return v;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficientMarginal) throw;
      CriterionVerdict v = make_verdict("nf_C", 0.0, bound, opt.detection_eps);
      v.detected = false;
      v.margin = -bound;
      note(v, "inconclusive: rank-deficient marginal, normal form undefined");
      return v;
    }
  }
  const ChiMatrix chi = chi_matrix(rho);
  const double lhs = trace_norm((chi.chi_prime() - chi.chi).eval());
  const double bound = 2.0 - purity(rho.marginal(Subsystem::A)) - purity(rho.marginal(Subsystem::B));
  return make_verdict("nf_gamma", lhs, bound, opt.detection_eps);
}

// ---------------------------------------------------------------------------
// Steering (by Alice; Bob's side is trusted)

/// ||C||_tr <= kappa_A kappa_B with kappa_A = sqrt(sum lambda_max(X_A^2)).
inline CriterionVerdict steer_criterion_C(const DensityMatrix& rho, const Measurement& xa, const Measurement& xb,
                                          const CriterionOptions& opt = {}) {
  const CorrelationMatrices c = correlations(rho, xa, xb);
  const EigenNormBound ka = eigen_norm_bound(xa, opt.orbit_search, opt.seed);
  const BxNorm kb = max_bx_norm(xb, opt.bx_search);
  CriterionVerdict v = make_verdict("steer_C", trace_norm(c.C), ka.value * kb.value, opt.detection_eps);
  v.params["kappa_a"] = ka.value;
  v.params["kappa_b"] = kb.value;
  v.params["orbit_search"] = ka.orbit_searched;
  v.params["kappa_b_method"] = kb.method;
  if (!kb.certified) note(v, "kappa_B from numeric maximization is a lower bound");
  return v;
}

/// ||Xi o gamma||_tr <= (V(rho_A, xi o X^A) + V(rho_B, X^B) - S_B) / 2.
/// Xi o gamma is the gamma matrix of the rescaled set xi o X^A, so any real xi
/// is admissible.
inline CriterionVerdict steer_criterion_gamma(const DensityMatrix& rho, const Measurement& xa,
                                              const Measurement& xb, const RealVector& xi,
                                              const CriterionOptions& opt = {}) {
  if (xi.size() != xa.size()) throw Error(ErrorCode::DimensionMismatch, "xi length differs from m");
  require_finite(xi, "xi");
  const CorrelationMatrices c = correlations(rho, xa, xb);
  const SideVariances s = side_variances(rho, xa, xb, opt, false);
  const DensityMatrix ra = rho.marginal(Subsystem::A);
  double va_xi = 0.0;
  for (int mu = 0; mu < xa.size(); ++mu) va_xi += xi(mu) * xi(mu) * variance(ra, xa[mu]);
  const RealMatrix scaled = xi.asDiagonal() * c.gamma;
  const double bound = (va_xi + s.vb - s.sb.value) / 2.0;
  CriterionVerdict v = make_verdict("steer_gamma", trace_norm(scaled), bound, opt.detection_eps);
  v.params["V_a_xi"] = va_xi;
  v.params["V_b"] = s.vb;
  v.params["S_b"] = s.sb.value;
  return v;
}

struct SteeringGammaParts {
  double gamma_norm = 0.0;  // ||gamma||_tr
  double va = 0.0;
  double vb = 0.0;
  double sb = 0.0;
  bool sb_certified = true;
};

inline SteeringGammaParts steer_gamma_parts(const DensityMatrix& rho, const Measurement& xa, const Measurement& xb,
                                            const CriterionOptions& opt = {}) {
  const CorrelationMatrices c = correlations(rho, xa, xb);
  const SideVariances s = side_variances(rho, xa, xb, opt, false);
  return {trace_norm(c.gamma), s.va, s.vb, s.sb.value, s.sb.certified};
}

/// Single-parameter form: ||gamma||_tr <= (xi^2 V_A + V_B - S_B) / (2 xi), xi > 0.
inline CriterionVerdict steer_gamma_verdict(const SteeringGammaParts& p, double xi, double detection_eps = 1e-9) {
  if (!(xi > 0.0) || !std::isfinite(xi)) throw Error(ErrorCode::NonpositiveXi, "xi must be a positive real");
  const double bound = (xi * xi * p.va + p.vb - p.sb) / (2.0 * xi);
  CriterionVerdict v = make_verdict("steer_gamma_xi", p.gamma_norm, bound, detection_eps);
  v.params["xi"] = xi;
  v.params["V_a"] = p.va;
  v.params["V_b"] = p.vb;
  v.params["S_b"] = p.sb;
  return v;
}

inline CriterionVerdict steer_criterion_gamma(const DensityMatrix& rho, const Measurement& xa,
                                              const Measurement& xb, double xi, const CriterionOptions& opt = {}) {
  if (!(xi > 0.0) || !std::isfinite(xi)) throw Error(ErrorCode::NonpositiveXi, "xi must be a positive real");
  return steer_gamma_verdict(steer_gamma_parts(rho, xa, xb, opt), xi, opt.detection_eps);
}

/// Normal-form bound (2 sum xi^2 |nhat_A|^2 + 2 sum |nhat_B|^2 - d S_B) / (2d);
/// rho must already have maximally mixed marginals.
inline CriterionVerdict steer_criterion_nf(const DensityMatrix& rho, const Measurement& xa, const Measurement& xb,
                                           const RealVector& xi, const CriterionOptions& opt = {}) {
  detail::require_pair(rho, xa, xb);
  if (xi.size() != xa.size()) throw Error(ErrorCode::DimensionMismatch, "xi length differs from m");
  const int da = rho.dim_a();
  const int db = rho.dim_b();
  if (marginal_deviation(rho.mat(), da, db) > 1e-8) {
    throw Error(ErrorCode::InvalidInput, "state is not in normal form (marginals differ from 1/d)");
  }
  const CorrelationMatrices c = correlations(rho, xa, xb);
  const UncertaintyBound sb = uncertainty_bound(xb, opt.uncertainty);
  const RealVector la = xa.nhat().rowwise().squaredNorm();
  const RealVector lb = xb.nhat().rowwise().squaredNorm();
  double sa = 0.0;
  for (int mu = 0; mu < xa.size(); ++mu) sa += xi(mu) * xi(mu) * la(mu);
  const int d = da;
  const double bound = (2.0 * sa + 2.0 * lb.sum() - d * sb.value) / (2.0 * d);
  const RealMatrix scaled = xi.asDiagonal() * c.gamma;
  CriterionVerdict v = make_verdict("steer_nf", trace_norm(scaled), bound, opt.detection_eps);
  v.params["S_b"] = sb.value;
  return v;
}

/// V_A + V_B - 2 ||gamma||_tr >= S_B for unsteerable states; threshold
/// 2 * detection_eps as in lur_criterion.
inline CriterionVerdict steer_lur(const DensityMatrix& rho, const Measurement& xa, const Measurement& xb,
                                  const CriterionOptions& opt = {}) {
  const CorrelationMatrices c = correlations(rho, xa, xb);
  const SideVariances s = side_variances(rho, xa, xb, opt, false);
  const double joint = s.va + s.vb - 2.0 * trace_norm(c.gamma);
  CriterionVerdict v = make_verdict("steer_lur", joint, s.sb.value, 2.0 * opt.detection_eps, true);
  v.params["V_a"] = s.va;
  v.params["V_b"] = s.vb;
  v.params["S_b"] = s.sb.value;
  return v;
}

struct XiOptimum {
  double xi = 1.0;
  CriterionVerdict verdict;
};

/// Golden-section search on [lo, hi] for the scalar xi maximizing the margin.
inline XiOptimum optimize_xi(const DensityMatrix& rho, const Measurement& xa, const Measurement& xb,
                             const CriterionOptions& opt = {}, double lo = 1e-3, double hi = 10.0) {
  const SteeringGammaParts p = steer_gamma_parts(rho, xa, xb, opt);
  auto margin = [&](double xi) { return p.gamma_norm - (xi * xi * p.va + p.vb - p.sb) / (2.0 * xi); };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = margin(x1), f2 = margin(x2);
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = margin(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = margin(x1);
    }
  }
  XiOptimum out;
  out.xi = 0.5 * (a + b);
  out.verdict = steer_gamma_verdict(p, out.xi, opt.detection_eps);
  note(out.verdict, "xi from golden-section search");
  return out;
}

}  // namespace qorrelate

#endif  // QORRELATE_CRITERIA_HPP

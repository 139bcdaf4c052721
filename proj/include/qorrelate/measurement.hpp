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

#ifndef QORRELATE_MEASUREMENT_HPP
#define QORRELATE_MEASUREMENT_HPP

#include <qorrelate/matkernel.hpp>
#include <qorrelate/optimize.hpp>
#include <qorrelate/qstate.hpp>
#include <qorrelate/subasis.hpp>

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qorrelate {

struct MeasurementFlags {
  bool traceless = false;
  bool homogeneous = false;
  std::optional<double> common_trace;   // h, when every Tr[X_mu] agrees
  std::optional<double> common_length;  // alpha, when homogeneous
};

/// Ordered list of m Hermitian observables on C^d with their coefficient
/// rows n_mu = (n_0, nhat_mu) in the Gell-Mann basis.
class Measurement {
 public:
  Measurement() = default;

  static Measurement from_observables(std::vector<ComplexMatrix> mats, const Tolerance& tol = {}) {
    if (mats.empty()) throw Error(ErrorCode::InvalidInput, "measurement needs at least one observable");
    const auto d = mats.front().rows();
    if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "observable dimension must be >= 2");
    for (const auto& x : mats) {
      if (x.rows() != d || x.cols() != d) {
        throw Error(ErrorCode::DimensionMismatch, "observables must share one square dimension");
      }
    }
    return from_observables(std::move(mats), cached_basis(static_cast<int>(d)), tol);
  }

  static Measurement from_observables(std::vector<ComplexMatrix> mats, const SuBasis& basis,
                                      const Tolerance& tol = {}) {
    if (mats.empty()) throw Error(ErrorCode::InvalidInput, "measurement needs at least one observable");
    Measurement out;
    out.dim_ = basis.dim;
    out.coeffs_.resize(static_cast<Eigen::Index>(mats.size()), basis.size());
    for (size_t mu = 0; mu < mats.size(); ++mu) {
      out.coeffs_.row(static_cast<Eigen::Index>(mu)) = expand_observable(mats[mu], basis, tol).transpose();
      mats[mu] = 0.5 * (mats[mu] + mats[mu].adjoint()).eval();
    }
    out.obs_ = std::move(mats);
    out.compute_flags();
    return out;
  }

  /// Builds from an m x d^2 coefficient matrix.
  static Measurement from_coefficients(const RealMatrix& coeffs, const SuBasis& basis) {
    if (coeffs.cols() != basis.size() || coeffs.rows() == 0) {
      throw Error(ErrorCode::DimensionMismatch, "coefficient matrix must be m x d^2");
    }
    std::vector<ComplexMatrix> mats;
    for (Eigen::Index mu = 0; mu < coeffs.rows(); ++mu) {
      mats.push_back(assemble_observable(coeffs.row(mu).transpose(), basis));
    }
    Measurement out;
    out.dim_ = basis.dim;
    out.coeffs_ = coeffs;
    out.obs_ = std::move(mats);
    out.compute_flags();
    return out;
  }

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(obs_.size()); }
  const std::vector<ComplexMatrix>& observables() const { return obs_; }
  const ComplexMatrix& operator[](int mu) const { return obs_[mu]; }
  const RealMatrix& coeffs() const { return coeffs_; }
  const MeasurementFlags& flags() const { return flags_; }

  /// m x (d^2-1) traceless coefficient block.
  RealMatrix nhat() const { return coeffs_.rightCols(coeffs_.cols() - 1); }

  /// Coefficient matrix with columns n_mu (the d^2 x m form).
  RealMatrix coefficient_columns() const { return coeffs_.transpose(); }

  const std::string& label() const { return label_; }
  Measurement& with_label(std::string s) {
    label_ = std::move(s);
    return *this;
  }

 private:
  void compute_flags() {
    const double tiny = 1e-10;
    const RealVector n0 = coeffs_.col(0);
    const double tr_scale = std::sqrt(2.0 * dim_);  // Tr[X] = sqrt(2d) n0
    flags_.traceless = n0.cwiseAbs().maxCoeff() <= tiny;
    const double t0 = tr_scale * n0(0);
    bool same_trace = true;
    for (Eigen::Index mu = 0; mu < n0.size(); ++mu) {
      same_trace = same_trace && std::abs(tr_scale * n0(mu) - t0) <= tiny * std::max(1.0, std::abs(t0));
    }
    flags_.common_trace = same_trace ? std::optional<double>(t0) : std::nullopt;
    const RealVector len = nhat().rowwise().norm();
    const double l0 = len(0);
    bool same_len = true;
    for (Eigen::Index mu = 0; mu < len.size(); ++mu) {
      same_len = same_len && std::abs(len(mu) - l0) <= tiny * std::max(1.0, l0);
    }
    flags_.homogeneous = same_len;
    flags_.common_length = same_len ? std::optional<double>(l0) : std::nullopt;
  }

  int dim_ = 0;
  std::vector<ComplexMatrix> obs_;
  RealMatrix coeffs_;
  MeasurementFlags flags_;
  std::string label_;
};

inline Measurement new_measurement(std::vector<ComplexMatrix> mats, const SuBasis& basis,
                                   const Tolerance& tol = {}) {
  for (const auto& x : mats) {
    if (x.rows() != basis.dim || x.cols() != basis.dim) {
      throw Error(ErrorCode::DimensionMismatch, "observable dimension differs from basis");
    }
  }
  return Measurement::from_observables(std::move(mats), basis, tol);
}

inline void require_orthogonal(const RealMatrix& o, Eigen::Index m) {
  if (o.rows() != m || o.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "orbit matrix must be m x m");
  }
  const double r = max_abs((o * o.transpose() - RealMatrix::Identity(m, m)).eval());
  if (r > 1e-10) throw Error(ErrorCode::NotOrthogonal, "O O^T deviates from identity by " + std::to_string(r));
}

/// Y_mu = sum_nu O_mu_nu X_nu; coefficient rows transform as O * coeffs.
inline Measurement apply_orbit(const RealMatrix& o, const Measurement& x) {
  require_orthogonal(o, x.size());
  Measurement y = Measurement::from_coefficients(o * x.coeffs(), cached_basis(x.dim()));
  y.with_label(x.label());
  return y;
}

// ---------------------------------------------------------------------------
// Simplex and SCM

/// n x (n+1) matrix whose columns are unit vectors with pairwise cosine -1/n.
/// Column i has components h_k(i) sqrt((n+1)/n) with h_k the Helmert vectors
/// (1,...,1,-k,0,...)/sqrt(k(k+1)).
inline RealMatrix regular_simplex(int n) {
  if (n < 1) throw Error(ErrorCode::DimensionTooSmall, "simplex dimension must be >= 1");
  RealMatrix e = RealMatrix::Zero(n, n + 1);
  const double s = std::sqrt((n + 1.0) / n);
  for (int k = 1; k <= n; ++k) {
    const double c = 1.0 / std::sqrt(k * (k + 1.0));
    for (int i = 0; i < k; ++i) e(k - 1, i) = c * s;
    e(k - 1, k) = -k * c * s;
  }
  return e;
}

/// Columns (sqrt(n/(n+1)) e_i, 1/sqrt(n+1)); orthogonal iff the e_i form a
/// regular simplex.
inline RealMatrix simplex_augmented(const RealMatrix& e) {
  const auto n = e.rows();
  RealMatrix a(n + 1, n + 1);
  a.topRows(n) = std::sqrt(double(n) / (n + 1.0)) * e;
  a.row(n).setConstant(1.0 / std::sqrt(n + 1.0));
  return a;
}

struct ScmParameters {
  int dim = 0;
  double alpha = 0.0;
  double h = 0.0;
};

/// X_mu = (h/d) 1 + alpha e_mu . pi with e_mu the columns of `simplex`
/// ((d^2-1) x d^2).
inline Measurement scm_from_simplex(int d, double alpha, double h, const RealMatrix& simplex) {
  if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "SCM dimension must be >= 2");
  if (!(alpha > 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "alpha must be > 0");
  if (!(h >= 0.0)) throw Error(ErrorCode::ParameterOutOfRange, "h must be >= 0");
  const int n = d * d - 1;
  if (simplex.rows() != n || simplex.cols() != n + 1) {
    throw Error(ErrorCode::DimensionMismatch, "simplex must be (d^2-1) x d^2");
  }
  const SuBasis& b = cached_basis(d);
  RealMatrix coeffs(n + 1, n + 1);
  coeffs.col(0).setConstant(h / std::sqrt(2.0 * d));  // (h/d) 1 = (h / sqrt(2d)) Pi_0
  coeffs.rightCols(n) = alpha * simplex.transpose();
  Measurement m = Measurement::from_coefficients(coeffs, b);
  m.with_label("scm");
  return m;
}

inline Measurement scm(int d, double alpha, double h) {
  if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "SCM dimension must be >= 2");
  return scm_from_simplex(d, alpha, h, regular_simplex(d * d - 1));
}

inline ScmParameters sic_parameters(int d) {
  return {d, std::sqrt((d - 1.0) / (2.0 * d * d * d)), 1.0 / d};
}

/// SCM at alpha^2 = (d-1)/(2d^3), h = 1/d with the canonical simplex.
inline Measurement sic_scm(int d) {
  const ScmParameters p = sic_parameters(d);
  Measurement m = scm(d, p.alpha, p.h);
  m.with_label("sic");
  return m;
}

/// Recognizes an SCM up to relabeling-free structure: m = d^2, common trace h,
/// common length alpha, pairwise nhat_mu . nhat_nu = -alpha^2/(d^2-1).
inline std::optional<ScmParameters> scm_parameters(const Measurement& x, double tol = 1e-9) {
  const int d = x.dim();
  const int m = x.size();
  if (m != d * d) return std::nullopt;
  const auto& f = x.flags();
  if (!f.common_trace || !f.common_length || *f.common_length <= tol) return std::nullopt;
  const double a = *f.common_length;
  const RealMatrix nh = x.nhat();
  const RealMatrix g = nh * nh.transpose();
  const double off = -a * a / (d * d - 1.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double want = i == j ? a * a : off;
      if (std::abs(g(i, j) - want) > tol * std::max(1.0, a * a)) return std::nullopt;
    }
  return ScmParameters{d, a, *f.common_trace};
}

struct SicCheck {
  bool is_povm = false;
  bool is_sic = false;
  double sum_residual = 0.0;    // |sum X_mu - 1|_max
  double min_eigenvalue = 0.0;  // over all X_mu
  double gram_residual = 0.0;   // vs (d delta + 1)/(d^2 (d+1))
};

inline RealMatrix gram(const Measurement& x);

inline SicCheck sic_check(const Measurement& x, const Tolerance& tol = {}) {
  SicCheck c;
  const int d = x.dim();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  c.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& o : x.observables()) {
    sum += o;
    const RealVector ev = hermitian_eigenvalues(o, tol);
    c.min_eigenvalue = std::min(c.min_eigenvalue, ev(ev.size() - 1));
  }
  c.sum_residual = max_abs((sum - ComplexMatrix::Identity(d, d)).eval());
  c.is_povm = c.sum_residual <= 1e-8 && c.min_eigenvalue >= -tol.eps_psd;
  if (x.size() == d * d) {
    const RealMatrix g = gram(x);
    double r = 0.0;
    for (int i = 0; i < x.size(); ++i)
      for (int j = 0; j < x.size(); ++j) {
        const double want = ((i == j ? d : 0) + 1.0) / (d * d * (d + 1.0));
        r = std::max(r, std::abs(g(i, j) - want));
      }
    c.gram_residual = r;
    c.is_sic = c.is_povm && r <= 1e-8;
  } else {
    c.gram_residual = std::numeric_limits<double>::infinity();
  }
  return c;
}

// ---------------------------------------------------------------------------
// Presets

/// {Pi_mu / sqrt2}, Tr[X_mu X_nu] = delta.
inline Measurement orthogonal_measurement(int d) {
  const SuBasis& b = cached_basis(d);
  std::vector<ComplexMatrix> mats;
  for (int mu = 0; mu < b.size(); ++mu) mats.push_back(b[mu] / std::sqrt(2.0));
  return Measurement::from_observables(std::move(mats), b).with_label("om");
}

inline Measurement pauli() {
  const SuBasis& b = cached_basis(2);
  return Measurement::from_observables(b.generators, b).with_label("pauli");
}

/// The d^2-1 generators {pi_mu}.
inline Measurement gell_mann_measurement(int d) {
  const SuBasis& b = cached_basis(d);
  return Measurement::from_observables(b.generators, b).with_label("gellmann");
}

/// {h 1/sqrt(d), pi_mu/sqrt2}.
inline Measurement scaled_gell_mann(int d, double h) {
  const SuBasis& b = cached_basis(d);
  std::vector<ComplexMatrix> mats;
  mats.push_back(h / std::sqrt(double(d)) * ComplexMatrix::Identity(d, d));
  for (const auto& g : b.generators) mats.push_back(g / std::sqrt(2.0));
  return Measurement::from_observables(std::move(mats), b).with_label("gellmann-h");
}

/// Two qubit observables alpha n1.sigma, alpha n2.sigma with n1 = x,
/// n2 = cos(theta) x + sin(theta) y.
inline Measurement dichotomy(double theta, double alpha = 1.0) {
  if (!std::isfinite(theta) || !(alpha > 0.0)) {
    throw Error(ErrorCode::ParameterOutOfRange, "dichotomy needs finite theta and alpha > 0");
  }
  const SuBasis& b = cached_basis(2);
  std::vector<ComplexMatrix> mats{alpha * b.generators[0],
                                  alpha * (std::cos(theta) * b.generators[0] + std::sin(theta) * b.generators[1])};
  return Measurement::from_observables(std::move(mats), b).with_label("dichotomy");
}

// ---------------------------------------------------------------------------
// Expectations, Gram matrix, reconstruction

inline RealVector expectation_vector(const ComplexMatrix& rho, const Measurement& x) {
  if (rho.rows() != x.dim() || rho.cols() != x.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "state and measurement dimensions differ");
  }
  RealVector v(x.size());
  for (int mu = 0; mu < x.size(); ++mu) v(mu) = expectation(rho, x[mu]);
  return v;
}

inline RealVector expectation_vector(const DensityMatrix& rho, const Measurement& x) {
  return expectation_vector(rho.mat(), x);
}

/// Omega_mu_nu = Tr[X_mu X_nu] = 2 n_mu . n_nu
inline RealMatrix gram(const Measurement& x) { return 2.0 * x.coeffs() * x.coeffs().transpose(); }

inline Eigen::Index span_dimension(const Measurement& x, const Tolerance& tol = {}) {
  return numerical_rank(x.coeffs(), tol);
}

namespace detail {

// Appends X_0 = 1 with datum Tr[rho] = 1, so that trace normalization is
// part of the data for sets whose span omits the identity.
struct Augmented {
  RealMatrix coeffs;
  RealVector data;
};

inline Augmented augment_identity(const RealVector& xvec, const Measurement& x) {
  if (xvec.size() != x.size()) throw Error(ErrorCode::DimensionMismatch, "data length differs from measurement size");
  require_finite(xvec, "expectation data");
  const int d = x.dim();
  Augmented a;
  a.coeffs.resize(x.size() + 1, d * d);
  a.coeffs.row(0).setZero();
  a.coeffs(0, 0) = std::sqrt(d / 2.0);  // 1 = sqrt(d/2) Pi_0
  a.coeffs.bottomRows(x.size()) = x.coeffs();
  a.data.resize(x.size() + 1);
  a.data(0) = 1.0;
  a.data.tail(x.size()) = xvec;
  return a;
}

inline RealVector solve_weights(const Augmented& a, const Tolerance& tol) {
  const int d2 = static_cast<int>(a.coeffs.cols());
  if (numerical_rank(a.coeffs, tol) < d2) {
    throw Error(ErrorCode::IncompleteMeasurement, "observables with the identity do not span the operator space");
  }
  const RealMatrix omega = 2.0 * a.coeffs * a.coeffs.transpose();
  const RealMatrix omega_pinv = pinv(omega, tol);
  const RealVector w = omega_pinv * a.data;
  const double resid = (omega * w - a.data).cwiseAbs().maxCoeff();
  if (resid > 1e-8 * std::max(1.0, a.data.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::InconsistentData, "data outside the range of the Gram matrix, residual " +
                                                 std::to_string(resid));
  }
  return w;
}

}  // namespace detail

/// x^T Omega^- x with the identity appended as a known datum.
inline double purity_from_moments(const RealVector& xvec, const Measurement& x, const Tolerance& tol = {}) {
  const auto a = detail::augment_identity(xvec, x);
  const RealVector w = detail::solve_weights(a, tol);
  return a.data.dot(w);
}

/// rho = sum omega_mu X_mu with omega = Omega^- x (null-space term dropped).
inline DensityMatrix reconstruct_general(const RealVector& xvec, const Measurement& x, const Tolerance& tol = {}) {
  const auto a = detail::augment_identity(xvec, x);
  const RealVector w = detail::solve_weights(a, tol);
  const RealVector n = a.coeffs.transpose() * w;
  return DensityMatrix::single(assemble_observable(n, cached_basis(x.dim())), tol);
}

struct ScmReconstruction {
  ComplexMatrix matrix;
  bool is_psd = false;
  double min_eigenvalue = 0.0;
  bool pinv_branch = false;

  DensityMatrix state(const Tolerance& tol = {}) const {
    if (!is_psd) throw Error(ErrorCode::NotPSD, "reconstructed matrix eigenvalue " + std::to_string(min_eigenvalue));
    return DensityMatrix::single(matrix, tol);
  }
};

/// rho = (d^2-1)/(2 d^2 alpha^2) sum x_mu X_mu + (1/d - h^2 (d^2-1)/(2 d^2 alpha^2)) 1
/// for h > 0; h = 0 solves the identity-augmented Gram system instead.
inline ScmReconstruction reconstruct_scm(const RealVector& xvec, const Measurement& x, const Tolerance& tol = {}) {
  const auto p = scm_parameters(x);
  if (!p) throw Error(ErrorCode::NotSCM, "measurement is not a symmetric complete measurement");
  if (xvec.size() != x.size()) throw Error(ErrorCode::DimensionMismatch, "data length differs from measurement size");
  require_finite(xvec, "expectation data");
  const int d = x.dim();
  ScmReconstruction out;
  if (p->h > 1e-12) {
    const double a2 = p->alpha * p->alpha;
    const double k = (d * d - 1.0) / (2.0 * d * d * a2);
    out.matrix = (1.0 / d - p->h * p->h * k) * ComplexMatrix::Identity(d, d);
    for (int mu = 0; mu < x.size(); ++mu) out.matrix += (k * xvec(mu)) * x[mu];
  } else {
    const auto a = detail::augment_identity(xvec, x);
    const RealVector w = detail::solve_weights(a, tol);
    out.matrix = assemble_observable(a.coeffs.transpose() * w, cached_basis(d));
    out.pinv_branch = true;
  }
  out.matrix = 0.5 * (out.matrix + out.matrix.adjoint()).eval();
  const RealVector ev = hermitian_eigenvalues(out.matrix, tol);
  out.min_eigenvalue = ev(ev.size() - 1);
  out.is_psd = out.min_eigenvalue >= -tol.eps_psd;
  return out;
}

// ---------------------------------------------------------------------------
// Extent of B(X)

struct BxNorm {
  double value = 0.0;   // max |x| over B(X)
  std::string method;   // closed_form_qubit | closed_form_tight_frame | numeric_max
  bool certified = true;  // false: numeric value is a lower bound on the maximum
};

inline BxNorm max_bx_norm_numeric(const Measurement& x, const MultiStartOptions& opt = {}) {
  const PureStateOptimum r = maximize_moment_norm(x.observables(), opt);
  return {std::sqrt(std::max(r.value, 0.0)), "numeric_max", false};
}

/// Closed forms: a qubit traceless set gives lambda_max(N); a set whose
/// N_full = sum n_mu n_mu^T has zero (0,k) block and N = c 1 gives
/// (2/d) N_00 + c 2(d-1)/d. Both are orbit invariants. Anything else goes to
/// the multi-start pure-state maximizer.
inline BxNorm max_bx_norm(const Measurement& x, const MultiStartOptions& opt = {}) {
  const int d = x.dim();
  const RealMatrix nf = x.coeffs().transpose() * x.coeffs();
  const int n = d * d - 1;
  const RealMatrix nh = nf.bottomRightCorner(n, n);
  const double scale = std::max(1.0, max_abs(nf));
  if (d == 2 && x.flags().traceless) {
    return {std::sqrt(std::max(symmetric_eigenvalues(nh)(0), 0.0)), "closed_form_qubit", true};
  }
  const double c = nh.trace() / n;
  const bool cross_zero = max_abs(nf.row(0).tail(n).eval()) <= 1e-12 * scale;
  const bool isotropic = max_abs((nh - c * RealMatrix::Identity(n, n)).eval()) <= 1e-12 * scale;
  if (cross_zero && isotropic) {
    const double v = (2.0 / d) * nf(0, 0) + c * 2.0 * (d - 1.0) / d;
    return {std::sqrt(std::max(v, 0.0)), "closed_form_tight_frame", true};
  }
  return max_bx_norm_numeric(x, opt);
}

struct EigenNormBound {
  double value = 0.0;
  bool orbit_searched = false;
  bool upper_bound_on_min = false;  // set when orbit_searched
  RealMatrix orbit;                 // best O found (identity when not searched)
};

inline double eigen_norm_value(const std::vector<ComplexMatrix>& xs) {
  double s = 0.0;
  for (const auto& o : xs) {
    const RealVector ev = hermitian_eigenvalues(o);
    const double top = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    s += top * top;  // lambda_max(X^2)
  }
  return std::sqrt(s);
}

/// sqrt(sum_mu lambda_max(X_mu^2)) for the set as given; with orbit_search,
/// the best value over 32 Cayley-parametrized coordinate searches in O(m).
inline EigenNormBound eigen_norm_bound(const Measurement& x, bool orbit_search = false, std::uint64_t seed = 0,
                                       int starts = 32) {
  EigenNormBound out;
  const int m = x.size();
  out.value = eigen_norm_value(x.observables());
  out.orbit = RealMatrix::Identity(m, m);
  if (!orbit_search || m < 2) return out;
  auto f = [&](const RealMatrix& o) {
    std::vector<ComplexMatrix> ys(m, ComplexMatrix::Zero(x.dim(), x.dim()));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) ys[i] += o(i, j) * x[j];
    const double v = eigen_norm_value(ys);
    return v * v;
  };
  const OrthogonalOptimum r = minimize_over_orthogonal(m, f, starts, seed);
  out.orbit_searched = true;
  out.upper_bound_on_min = true;
  if (std::sqrt(r.value) < out.value) {
    out.value = std::sqrt(r.value);
    out.orbit = r.o;
  }
  return out;
}

}  // namespace qorrelate

#endif  // QORRELATE_MEASUREMENT_HPP

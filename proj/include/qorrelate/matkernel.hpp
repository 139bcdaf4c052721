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

#ifndef QORRELATE_MATKERNEL_HPP
#define QORRELATE_MATKERNEL_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qorrelate {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

enum class ErrorCode {
  InvalidInput,
  NonFinite,
  DimensionMismatch,
  DimensionTooSmall,
  NotHermitian,
  NotPSD,
  SingularMatrix,
  NotOrthogonal,
  ParameterOutOfRange,
  RankDeficientMarginal,
  NoConvergence,
  IncompleteMeasurement,
  InconsistentData,
  NotSCM,
  NonpositiveXi,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::RankDeficientMarginal: return "RankDeficientMarginal";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::IncompleteMeasurement: return "IncompleteMeasurement";
    case ErrorCode::InconsistentData: return "InconsistentData";
    case ErrorCode::NotSCM: return "NotSCM";
    case ErrorCode::NonpositiveXi: return "NonpositiveXi";
  }
  return "Unknown";
}

// Library-wide exception. `numerical()` separates failures of an iteration or
// factorization from rejected input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  bool numerical() const noexcept {
    return code_ == ErrorCode::NoConvergence || code_ == ErrorCode::SingularMatrix ||
           code_ == ErrorCode::RankDeficientMarginal;
  }

 private:
  ErrorCode code_;
};

/// Numeric thresholds shared by every module.
struct Tolerance {
  double eps_herm = 1e-10;  // Hermiticity residual, relative to max(1, |M|_max)
  double eps_psd = 1e-10;   // eigenvalues in [-eps_psd, 0) are clipped to zero
  double eps_rank = 1e-10;  // singular values below eps_rank * sigma_max are dropped
  double eps_conv = 1e-12;  // fixed-point iterations

  void validate() const {
    if (!(eps_herm > 0 && eps_psd > 0 && eps_rank > 0 && eps_conv > 0)) {
      throw Error(ErrorCode::InvalidInput, "tolerances must be strictly positive");
    }
  }
};

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const auto v = m.derived().data()[i];
    if (!std::isfinite(std::real(v)) || !std::isfinite(std::imag(v))) return false;
  }
  return true;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!all_finite(m.eval())) throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN/Inf entries");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square");
  }
}

template <typename Derived>
double hermiticity_residual(const Eigen::MatrixBase<Derived>& m) {
  return max_abs((m - m.adjoint()).eval());
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& m, const Tolerance& tol, const char* what) {
  require_square(m, what);
  const double scale = std::max(1.0, max_abs(m.eval()));
  const double r = hermiticity_residual(m);
  if (r > tol.eps_herm * scale) {
    throw Error(ErrorCode::NotHermitian,
                std::string(what) + " Hermiticity residual " + std::to_string(r));
  }
}

/// Tr[A B] without forming the product.
template <typename DA, typename DB>
auto trace_product(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

/// Re Tr[rho X]; the expectation value of a Hermitian X.
inline double expectation(const ComplexMatrix& rho, const ComplexMatrix& x) {
  return trace_product(rho, x).real();
}

struct EigenSystem {
  RealVector values;     // descending
  ComplexMatrix vectors;  // column i pairs with values(i)
};

inline EigenSystem hermitian_eig(const ComplexMatrix& m, const Tolerance& tol = {}) {
  require_finite(m, "matrix");
  require_hermitian(m, tol, "matrix");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sym);
  EigenSystem out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

/// Eigenvalues only, descending.
inline RealVector hermitian_eigenvalues(const ComplexMatrix& m, const Tolerance& tol = {}) {
  require_hermitian(m, tol, "matrix");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(sym, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .reverse();
}

inline RealVector symmetric_eigenvalues(const RealMatrix& m) {
  const RealMatrix sym = 0.5 * (m + m.transpose());
  return Eigen::SelfAdjointEigenSolver<RealMatrix>(sym, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .reverse();
}

template <typename Scalar>
struct Svd {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> u;
  RealVector sigma;  // descending, nonnegative
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v;
};

/// Thin SVD: M = U diag(sigma) V^dagger.
template <typename Derived>
Svd<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& m) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat a = m;
  require_finite(a, "matrix");
  Svd<typename Derived::Scalar> out;
  if (a.size() == 0) return out;
  Eigen::JacobiSVD<Mat> solver(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.u = solver.matrixU();
  out.sigma = solver.singularValues();
  out.v = solver.matrixV();
  return out;
}

template <typename Derived>
RealVector singular_values(const Eigen::MatrixBase<Derived>& m) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat a = m;
  if (a.size() == 0) return RealVector();
  return Eigen::JacobiSVD<Mat>(a).singularValues();
}

/// Sum of singular values.
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& m) {
  return singular_values(m).sum();
}

/// Moore-Penrose pseudo-inverse with a relative rank cutoff eps_rank * sigma_max.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> pinv(
    const Eigen::MatrixBase<Derived>& m, const Tolerance& tol = {}) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto f = svd(m);
  Mat out = Mat::Zero(m.cols(), m.rows());
  if (f.sigma.size() == 0 || f.sigma(0) == 0.0) return out;
  const double cutoff = tol.eps_rank * f.sigma(0);
  for (Eigen::Index i = 0; i < f.sigma.size(); ++i) {
    if (f.sigma(i) <= cutoff) break;
    out.noalias() += (f.v.col(i) / f.sigma(i)) * f.u.col(i).adjoint();
  }
  return out;
}

/// Numerical rank under the same relative cutoff as pinv.
template <typename Derived>
Eigen::Index numerical_rank(const Eigen::MatrixBase<Derived>& m, const Tolerance& tol = {}) {
  const RealVector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return (s.array() > tol.eps_rank * s(0)).count();
}

template <typename DA, typename DB>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Mat = Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

enum class Subsystem { A, B };

inline void require_bipartite_shape(const ComplexMatrix& m, int dim_a, int dim_b) {
  if (dim_a < 1 || dim_b < 1 || m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    ", expected " + std::to_string(dim_a * dim_b) + " square");
  }
}

/// Row index convention: |i>_A |k>_B  ->  i * dim_b + k.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, int dim_a, int dim_b, Subsystem keep) {
  require_bipartite_shape(m, dim_a, dim_b);
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int k = 0; k < dim_b; ++k) out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (int k = 0; k < dim_b; ++k)
    for (int l = 0; l < dim_b; ++l)
      for (int i = 0; i < dim_a; ++i) out(k, l) += m(i * dim_b + k, i * dim_b + l);
  return out;
}

/// Transpose on subsystem B.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, int dim_a, int dim_b) {
  require_bipartite_shape(m, dim_a, dim_b);
  ComplexMatrix out(m.rows(), m.cols());
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j)
      for (int k = 0; k < dim_b; ++k)
        for (int l = 0; l < dim_b; ++l) out(i * dim_b + k, j * dim_b + l) = m(i * dim_b + l, j * dim_b + k);
  return out;
}

/// Realignment R(M)_{(i,j),(k,l)} = M_{(i,k),(j,l)}.
inline ComplexMatrix realign(const ComplexMatrix& m, int dim_a, int dim_b) {
  require_bipartite_shape(m, dim_a, dim_b);
  ComplexMatrix out(dim_a * dim_a, dim_b * dim_b);
  for (int i = 0; i < dim_a; ++i)
    for (int j = 0; j < dim_a; ++j)
      for (int k = 0; k < dim_b; ++k)
        for (int l = 0; l < dim_b; ++l) out(i * dim_a + j, k * dim_b + l) = m(i * dim_b + k, j * dim_b + l);
  return out;
}

namespace detail {

inline EigenSystem psd_eig(const ComplexMatrix& m, const Tolerance& tol) {
  EigenSystem es = hermitian_eig(m, tol);
  const double scale = std::max(1.0, es.values.size() ? std::abs(es.values(0)) : 0.0);
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values(i) < -tol.eps_psd * scale) {
      throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(es.values(i)));
    }
    es.values(i) = std::max(es.values(i), 0.0);
  }
  return es;
}

}  // namespace detail

inline ComplexMatrix sqrtm_psd(const ComplexMatrix& m, const Tolerance& tol = {}) {
  const EigenSystem es = detail::psd_eig(m, tol);
  return es.vectors * es.values.cwiseSqrt().asDiagonal() * es.vectors.adjoint();
}

/// M^(-1/2) for a positive definite M; rank-deficient input is a SingularMatrix error.
inline ComplexMatrix inv_sqrtm_psd(const ComplexMatrix& m, const Tolerance& tol = {}) {
  const EigenSystem es = detail::psd_eig(m, tol);
  const double top = es.values.size() ? es.values(0) : 0.0;
  if (es.values.size() == 0 || es.values(es.values.size() - 1) <= tol.eps_rank * std::max(top, 1e-300)) {
    throw Error(ErrorCode::SingularMatrix, "matrix is rank deficient");
  }
  return es.vectors * es.values.cwiseSqrt().cwiseInverse().asDiagonal() * es.vectors.adjoint();
}

}  // namespace qorrelate

#endif  // QORRELATE_MATKERNEL_HPP

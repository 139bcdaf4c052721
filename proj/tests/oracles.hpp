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

// Reference implementations used as oracles. They are written from textbook
// definitions (explicit matrices, index loops, closed forms) and share no code
// paths with the library beyond its matrix types.

#ifndef QORRELATE_TESTS_ORACLES_HPP
#define QORRELATE_TESTS_ORACLES_HPP

#include <qorrelate/matkernel.hpp>

#include <Eigen/QR>

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using qorrelate::ComplexMatrix;
using qorrelate::ComplexVector;
using qorrelate::cplx;
using qorrelate::RealMatrix;
using qorrelate::RealVector;

inline const cplx I{0.0, 1.0};

inline ComplexMatrix id(int d) { return ComplexMatrix::Identity(d, d); }

inline ComplexMatrix sx() { return (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished(); }
inline ComplexMatrix sy() { return (ComplexMatrix(2, 2) << 0, -I, I, 0).finished(); }
inline ComplexMatrix sz() { return (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished(); }
inline std::array<ComplexMatrix, 3> paulis() { return {sx(), sy(), sz()}; }

/// The eight standard qutrit Gell-Mann matrices lambda_1..lambda_8.
inline std::vector<ComplexMatrix> qutrit_gell_mann() {
  std::vector<ComplexMatrix> l(8, ComplexMatrix::Zero(3, 3));
  l[0](0, 1) = l[0](1, 0) = 1;
  l[1](0, 1) = -I;
  l[1](1, 0) = I;
  l[2](0, 0) = 1;
  l[2](1, 1) = -1;
  l[3](0, 2) = l[3](2, 0) = 1;
  l[4](0, 2) = -I;
  l[4](2, 0) = I;
  l[5](1, 2) = l[5](2, 1) = 1;
  l[6](1, 2) = -I;
  l[6](2, 1) = I;
  l[7](0, 0) = l[7](1, 1) = 1.0 / std::sqrt(3.0);
  l[7](2, 2) = -2.0 / std::sqrt(3.0);
  return l;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Entry <i k| m |j l> of a bipartite operator.
inline cplx at(const ComplexMatrix& m, int db, int i, int k, int j, int l) { return m(i * db + k, j * db + l); }

inline ComplexMatrix partial_transpose_b(const ComplexMatrix& m, int da, int db) {
  ComplexMatrix out(m.rows(), m.cols());
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l) out(i * db + k, j * db + l) = at(m, db, i, l, j, k);
  return out;
}

inline ComplexMatrix trace_out_b(const ComplexMatrix& m, int da, int db) {
  ComplexMatrix out = ComplexMatrix::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k) out(i, j) += at(m, db, i, k, j, k);
  return out;
}

inline ComplexMatrix trace_out_a(const ComplexMatrix& m, int da, int db) {
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (int k = 0; k < db; ++k)
    for (int l = 0; l < db; ++l)
      for (int i = 0; i < da; ++i) out(k, l) += at(m, db, i, k, i, l);
  return out;
}

/// Two-qubit entanglement test: det(rho^T_B) < 0.
inline bool two_qubit_entangled(const ComplexMatrix& rho) {
  return partial_transpose_b(rho, 2, 2).determinant().real() < 0.0;
}

/// Pseudo-inverse by complete orthogonal decomposition.
template <typename Mat>
Mat cod_pinv(const Mat& a, double threshold = 1e-10) {
  Eigen::CompleteOrthogonalDecomposition<Mat> cod;
  cod.setThreshold(threshold);
  cod.compute(a);
  return cod.pseudoInverse();
}

/// Worst of the four Moore-Penrose residuals (max-abs norm).
template <typename Mat>
double moore_penrose_residual(const Mat& a, const Mat& p) {
  const double r1 = (a * p * a - a).cwiseAbs().maxCoeff();
  const double r2 = (p * a * p - p).cwiseAbs().maxCoeff();
  const double r3 = ((a * p).adjoint() - a * p).cwiseAbs().maxCoeff();
  const double r4 = ((p * a).adjoint() - p * a).cwiseAbs().maxCoeff();
  return std::max(std::max(r1, r2), std::max(r3, r4));
}

/// Sum of square roots of the eigenvalues of the smaller Gram matrix of A.
inline double trace_norm(const RealMatrix& a) {
  const RealMatrix g = a.rows() <= a.cols() ? RealMatrix(a * a.transpose()) : RealMatrix(a.transpose() * a);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(g);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) s += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
  return s;
}

inline double expect(const ComplexMatrix& rho, const ComplexMatrix& x) { return (rho * x).trace().real(); }

inline double variance(const ComplexMatrix& rho, const ComplexMatrix& x) {
  const double m = expect(rho, x);
  return expect(rho, x * x) - m * m;
}

inline double purity(const ComplexMatrix& rho) { return (rho * rho).trace().real(); }

/// Random orthogonal matrix from the sign-fixed QR of a Gaussian matrix.
inline RealMatrix random_orthogonal(int m, std::mt19937& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  RealMatrix g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = n(gen);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  for (int j = 0; j < m; ++j)
    if (qr.matrixQR()(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

/// G G^dagger / Tr for a complex Gaussian G.
inline ComplexMatrix random_state(int n, std::mt19937& gen) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(g(gen), g(gen));
  const ComplexMatrix r = a * a.adjoint();
  return r / r.trace().real();
}

inline ComplexMatrix random_pure(int n, std::mt19937& gen) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(g(gen), g(gen));
  v.normalize();
  return v * v.adjoint();
}

/// (1 + sum t_i sigma_i (x) sigma_i) / 4.
inline ComplexMatrix bell_diagonal(const std::array<double, 3>& t) {
  const auto s = paulis();
  ComplexMatrix r = id(4);
  for (int i = 0; i < 3; ++i) r += t[i] * kron(s[i], s[i]);
  return r / 4.0;
}

/// p |psi-><psi-| + (1-p) 1/4.
inline ComplexMatrix werner(double p) {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  return p * psi * psi.adjoint() + (1.0 - p) * id(4) / 4.0;
}

/// eta |Phi+><Phi+| + (1-eta) 1/d^2.
inline ComplexMatrix isotropic(int d, double eta) {
  ComplexVector phi = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(double(d));
  return eta * phi * phi.adjoint() + (1.0 - eta) * id(d * d) / double(d * d);
}

/// Weyl-Heisenberg SIC projectors from a known fiducial (d = 2 or 3).
inline std::vector<ComplexMatrix> wh_sic(int d) {
  ComplexVector f(d);
  if (d == 2) {
    const double th = std::acos(1.0 / std::sqrt(3.0));
    f << std::cos(th / 2), std::exp(I * (M_PI / 4)) * std::sin(th / 2);
  } else {
    f << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  }
  const cplx w = std::exp(2.0 * M_PI * I / double(d));
  ComplexMatrix x = ComplexMatrix::Zero(d, d), z = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    x((k + 1) % d, k) = 1.0;
    z(k, k) = std::pow(w, k);
  }
  std::vector<ComplexMatrix> out;
  ComplexMatrix xa = id(d);
  for (int a = 0; a < d; ++a) {
    ComplexMatrix zb = id(d);
    for (int b = 0; b < d; ++b) {
      const ComplexVector v = xa * zb * f;
      out.push_back(v * v.adjoint());
      zb = zb * z;
    }
    xa = xa * x;
  }
  return out;
}

/// Inverse of xi 1 + eta J_n, and the pseudo-inverse of eta (J_n - n 1).
inline RealMatrix structured_inverse(double xi, double eta, int n) {
  const RealMatrix j = RealMatrix::Ones(n, n);
  return RealMatrix::Identity(n, n) / xi - eta / (xi * (xi + n * eta)) * j;
}

inline RealMatrix structured_pinv_singular(double eta, int n) {
  const RealMatrix j = RealMatrix::Ones(n, n);
  return (j / double(n * n) - RealMatrix::Identity(n, n) / double(n)) / eta;
}

}  // namespace oracle

#endif  // QORRELATE_TESTS_ORACLES_HPP

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

#ifndef QORRELATE_OPTIMIZE_HPP
#define QORRELATE_OPTIMIZE_HPP

#include <qorrelate/matkernel.hpp>
#include <qorrelate/qstate.hpp>

#include <functional>
#include <vector>

namespace qorrelate {

struct PureStateOptimum {
  double value = 0.0;
  ComplexVector state;
  int best_start = -1;
  int starts = 0;
};

struct MultiStartOptions {
  int starts = 64;
  std::uint64_t seed = 0;
  int max_iter = 2000;
  double tol = 1e-15;
};

namespace detail {

inline std::vector<double> moments(const std::vector<ComplexMatrix>& xs, const ComplexVector& psi) {
  std::vector<double> x(xs.size());
  for (size_t mu = 0; mu < xs.size(); ++mu) x[mu] = psi.dot(xs[mu] * psi).real();
  return x;
}

inline ComplexVector extreme_eigenvector(const ComplexMatrix& h, bool top) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  return top ? es.eigenvectors().col(h.rows() - 1) : es.eigenvectors().col(0);
}

// Starts: eigenvectors of each observable (both ends of the spectrum) first,
// then Haar-random vectors from per-start derived seeds.
inline std::vector<ComplexVector> start_vectors(const std::vector<ComplexMatrix>& xs, int d,
                                                const MultiStartOptions& opt) {
  std::vector<ComplexVector> out;
  for (const auto& x : xs) {
    if (static_cast<int>(out.size()) + 2 > opt.starts / 2) break;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (x + x.adjoint()));
    out.push_back(es.eigenvectors().col(d - 1));
    out.push_back(es.eigenvectors().col(0));
  }
  for (int s = static_cast<int>(out.size()); s < opt.starts; ++s) {
    Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(s)));
    out.push_back(random_pure_vector(d, rng));
  }
  return out;
}

// Majorization-minimization on pure states for f(psi) = <Q> + s * sum x_mu^2.
// s = +1 with maximize: f is convex in rho, the tangent lower-bounds it and is
// maximized by the top eigenvector of Q + 2 sum x_mu X_mu.
// s = -1 with minimize: f is concave, the tangent upper-bounds it and is
// minimized by the bottom eigenvector of Q - 2 sum x_mu X_mu.
inline PureStateOptimum mm_search(const std::vector<ComplexMatrix>& xs, const ComplexMatrix& q, double s,
                                  bool maximize, const MultiStartOptions& opt) {
  if (xs.empty()) throw Error(ErrorCode::InvalidInput, "empty observable list");
  const int d = static_cast<int>(xs.front().rows());
  auto value = [&](const ComplexVector& psi, std::vector<double>& x) {
    x = moments(xs, psi);
    double v = q.size() ? psi.dot(q * psi).real() : 0.0;
    for (double xm : x) v += s * xm * xm;
    return v;
  };
  PureStateOptimum best;
  best.starts = opt.starts;
  const auto starts = start_vectors(xs, d, opt);
  for (int si = 0; si < static_cast<int>(starts.size()); ++si) {
    ComplexVector psi = starts[si];
    std::vector<double> x;
    double v = value(psi, x);
    for (int it = 0; it < opt.max_iter; ++it) {
      ComplexMatrix h = q.size() ? q : ComplexMatrix::Zero(d, d);
      for (size_t mu = 0; mu < xs.size(); ++mu) h += (2.0 * s * x[mu]) * xs[mu];
      ComplexVector next = extreme_eigenvector(h, maximize);
      std::vector<double> xn;
      const double vn = value(next, xn);
      const bool improved = maximize ? vn > v : vn < v;
      if (!improved) break;
      const double gain = std::abs(vn - v);
      psi = next;
      x = xn;
      v = vn;
      if (gain <= opt.tol * std::max(1.0, std::abs(v))) break;
    }
    const bool better = best.best_start < 0 || (maximize ? v > best.value : v < best.value);
    if (better) {
      best.value = v;
      best.state = psi;
      best.best_start = si;
    }
  }
  return best;
}

}  // namespace detail

/// max over pure states of sum_mu <X_mu>^2.
inline PureStateOptimum maximize_moment_norm(const std::vector<ComplexMatrix>& xs,
                                             const MultiStartOptions& opt = {}) {
  return detail::mm_search(xs, ComplexMatrix(), +1.0, true, opt);
}

/// min over pure states of <Q> - sum_mu <X_mu>^2.
inline PureStateOptimum minimize_variance_form(const std::vector<ComplexMatrix>& xs, const ComplexMatrix& q,
                                               const MultiStartOptions& opt = {}) {
  return detail::mm_search(xs, q, -1.0, false, opt);
}

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix).
inline RealMatrix random_orthogonal(int m, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  RealMatrix g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = n01(rng);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

/// O = (I - A)(I + A)^-1 for skew A built from m(m-1)/2 parameters.
inline RealMatrix cayley(const RealVector& params, int m) {
  RealMatrix a = RealMatrix::Zero(m, m);
  int k = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      a(i, j) = params(k);
      a(j, i) = -params(k);
      ++k;
    }
  const RealMatrix id = RealMatrix::Identity(m, m);
  return (id - a) * (id + a).inverse();
}

struct OrthogonalOptimum {
  double value = 0.0;
  RealMatrix o;
  int best_start = -1;
};

/// Derivative-free coordinate search over O(m): each start fixes a base O0
/// (identity first, Haar-random after) and searches O0 * cayley(a).
inline OrthogonalOptimum minimize_over_orthogonal(int m, const std::function<double(const RealMatrix&)>& f,
                                                  int starts, std::uint64_t seed) {
  OrthogonalOptimum best;
  const int np = m * (m - 1) / 2;
  for (int s = 0; s < starts; ++s) {
    RealMatrix o0 = RealMatrix::Identity(m, m);
    if (s > 0) {
      Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
      o0 = random_orthogonal(m, rng);
    }
    RealVector p = RealVector::Zero(np);
    double v = f(o0);
    for (double step = 0.5; step > 1e-7; step *= 0.5) {
      bool moved = true;
      for (int sweep = 0; moved && sweep < 50; ++sweep) {
        moved = false;
        for (int k = 0; k < np; ++k) {
          for (double dir : {+1.0, -1.0}) {
            p(k) += dir * step;
            const double vt = f(o0 * cayley(p, m));
            if (vt < v - 1e-14) {
              v = vt;
              moved = true;
              break;
            }
            p(k) -= dir * step;
          }
        }
      }
    }
    if (best.best_start < 0 || v < best.value) {
      best.value = v;
      best.o = o0 * cayley(p, m);
      best.best_start = s;
    }
  }
  return best;
}

}  // namespace qorrelate

#endif  // QORRELATE_OPTIMIZE_HPP

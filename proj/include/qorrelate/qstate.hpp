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

#ifndef QORRELATE_QSTATE_HPP
#define QORRELATE_QSTATE_HPP

#include <qorrelate/matkernel.hpp>
#include <qorrelate/subasis.hpp>

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace qorrelate {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; maps (master seed, stream index) to an independent
/// generator seed so that ensemble element i is the same under any schedule.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class DensityMatrix {
 public:
  DensityMatrix() = default;

  /// Validates and symmetrizes. Rejects non-unit trace and eigenvalues below
  /// -eps_psd.
  static DensityMatrix single(const ComplexMatrix& m, const Tolerance& tol = {}) {
    require_square(m, "density matrix");
    return DensityMatrix(m, static_cast<int>(m.rows()), 1, false, tol);
  }

  static DensityMatrix bipartite(const ComplexMatrix& m, int dim_a, int dim_b,
                                 const Tolerance& tol = {}) {
    require_bipartite_shape(m, dim_a, dim_b);
    return DensityMatrix(m, dim_a, dim_b, true, tol);
  }

  const ComplexMatrix& mat() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  bool is_bipartite() const { return bipartite_; }

  DensityMatrix marginal(Subsystem keep) const {
    if (!bipartite_) throw Error(ErrorCode::InvalidInput, "marginal of a single-system state");
    ComplexMatrix r = partial_trace(mat_, dim_a_, dim_b_, keep);
    DensityMatrix out;
    out.mat_ = 0.5 * (r + r.adjoint());
    out.dim_a_ = static_cast<int>(r.rows());
    out.dim_b_ = 1;
    return out;
  }

 private:
  DensityMatrix(const ComplexMatrix& m, int da, int db, bool bip, const Tolerance& tol)
      : dim_a_(da), dim_b_(db), bipartite_(bip) {
    tol.validate();
    require_finite(m, "density matrix");
    require_hermitian(m, tol, "density matrix");
    mat_ = 0.5 * (m + m.adjoint());
    const double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > 1e-10) {
      throw Error(ErrorCode::InvalidInput, "density matrix trace " + std::to_string(tr));
    }
    const RealVector ev = hermitian_eigenvalues(mat_, tol);
    if (ev(ev.size() - 1) < -tol.eps_psd) {
      throw Error(ErrorCode::NotPSD, "density matrix eigenvalue " + std::to_string(ev(ev.size() - 1)));
    }
  }

  ComplexMatrix mat_;
  int dim_a_ = 0;
  int dim_b_ = 1;
  bool bipartite_ = false;
};

inline double purity(const DensityMatrix& rho) { return rho.mat().squaredNorm(); }

/// rho = 1/d + (1/2) rhat . pi
inline DensityMatrix from_bloch(const RealVector& rhat, const SuBasis& basis, const Tolerance& tol = {}) {
  const int d = basis.dim;
  ComplexMatrix m = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  m += 0.5 * assemble_traceless(rhat, basis);
  return DensityMatrix::single(m, tol);
}

/// rhat_k = Tr[rho pi_k]
inline RealVector to_bloch(const DensityMatrix& rho, const SuBasis& basis) {
  if (rho.dim() != basis.dim) throw Error(ErrorCode::DimensionMismatch, "state and basis dimensions differ");
  RealVector r(basis.size() - 1);
  for (int k = 0; k < r.size(); ++k) r(k) = expectation(rho.mat(), basis.generators[k]);
  return r;
}

// ---------------------------------------------------------------------------
// Sampling

inline ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  ComplexMatrix a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = n01(rng);
      const double im = n01(rng);
      a(i, j) = cplx(re, im);
    }
  return a;
}

inline ComplexVector random_pure_vector(int d, Rng& rng) {
  ComplexVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

inline ComplexMatrix hs_matrix(int n, Rng& rng) {
  const ComplexMatrix a = ginibre(n, n, rng);
  const ComplexMatrix aa = a * a.adjoint();
  return aa / aa.trace().real();
}

/// Hilbert-Schmidt random state on C^d.
inline DensityMatrix random_hs(int d, std::uint64_t seed) {
  if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "random_hs dimension must be >= 2");
  Rng rng(seed);
  return DensityMatrix::single(hs_matrix(d, rng));
}

/// Hilbert-Schmidt random state on C^dA (x) C^dB.
inline DensityMatrix random_hs(int dim_a, int dim_b, std::uint64_t seed) {
  if (dim_a < 2 || dim_b < 2) throw Error(ErrorCode::DimensionTooSmall, "random_hs dimension must be >= 2");
  Rng rng(seed);
  return DensityMatrix::bipartite(hs_matrix(dim_a * dim_b, rng), dim_a, dim_b);
}

inline DensityMatrix random_pure_state(int d, std::uint64_t seed) {
  Rng rng(seed);
  const ComplexVector v = random_pure_vector(d, rng);
  return DensityMatrix::single(v * v.adjoint());
}

inline DensityMatrix random_product_state(int dim_a, int dim_b, Rng& rng) {
  const ComplexVector a = random_pure_vector(dim_a, rng);
  const ComplexVector b = random_pure_vector(dim_b, rng);
  const ComplexVector ab = kron(a, b);
  return DensityMatrix::bipartite(ab * ab.adjoint(), dim_a, dim_b);
}

/// Convex mixture of k random pure product states with uniform simplex weights.
inline DensityMatrix random_separable(int dim_a, int dim_b, int k, Rng& rng) {
  if (k < 1) throw Error(ErrorCode::InvalidInput, "mixture size must be >= 1");
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> w(k);
  double total = 0.0;
  for (double& x : w) total += (x = ex(rng));
  const int n = dim_a * dim_b;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < k; ++i) {
    const ComplexVector ab = kron(random_pure_vector(dim_a, rng), random_pure_vector(dim_b, rng));
    m += (w[i] / total) * (ab * ab.adjoint());
  }
  return DensityMatrix::bipartite(m, dim_a, dim_b);
}

// ---------------------------------------------------------------------------
// Named families

inline DensityMatrix maximally_mixed(int dim_a, int dim_b) {
  const int n = dim_a * dim_b;
  return DensityMatrix::bipartite(ComplexMatrix::Identity(n, n) / static_cast<double>(n), dim_a, dim_b);
}

inline DensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::bipartite(kron(a.mat(), b.mat()), a.dim(), b.dim());
}

inline void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::ParameterOutOfRange, std::string(name) + " must lie in [0,1]");
  }
}

/// p |psi_s><psi_s| + (1-p) 1/4, psi_s = (|01> - |10>)/sqrt2.
inline DensityMatrix werner(double p) {
  require_unit_interval(p, "p");
  ComplexVector s = ComplexVector::Zero(4);
  s(1) = 1.0 / std::sqrt(2.0);
  s(2) = -1.0 / std::sqrt(2.0);
  ComplexMatrix m = p * (s * s.adjoint()) + (1.0 - p) / 4.0 * ComplexMatrix::Identity(4, 4);
  return DensityMatrix::bipartite(m, 2, 2);
}

/// 1/d^2 + eta/(2d) sum_mu pi_mu (x) pi_mu^T, which equals
/// eta Phi+ + (1-eta) 1/d^2.
inline DensityMatrix isotropic(int d, double eta) {
  if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "isotropic dimension must be >= 2");
  if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorCode::ParameterOutOfRange, "eta must lie in (0,1]");
  const SuBasis& b = cached_basis(d);
  const int n = d * d;
  ComplexMatrix m = ComplexMatrix::Identity(n, n) / static_cast<double>(n);
  for (const auto& g : b.generators) {
    m += (eta / (2.0 * d)) * kron(g, g.transpose().eval());
  }
  return DensityMatrix::bipartite(m, d, d);
}

/// (1/4)(1 (x) 1 + sum_mu t_mu sigma_mu (x) sigma_mu).
inline DensityMatrix bell_diagonal(const std::array<double, 3>& t, const Tolerance& tol = {}) {
  const SuBasis& b = cached_basis(2);
  ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  for (int k = 0; k < 3; ++k) m += t[k] * kron(b.generators[k], b.generators[k]);
  return DensityMatrix::bipartite(m / 4.0, 2, 2, tol);
}

/// Horodecki 3x3 PPT entangled family (Phys. Lett. A 232, 333, 1997) with
/// basis index 3i+j for |i>|j>.
inline DensityMatrix horodecki_3x3(double a) {
  require_unit_interval(a, "t");
  ComplexMatrix m = ComplexMatrix::Zero(9, 9);
  for (int i : {0, 1, 2, 3, 4, 5, 7}) m(i, i) = a;
  for (int i : {0, 4, 8})
    for (int j : {0, 4, 8})
      if (i != j) m(i, j) = a;
  m(6, 6) = m(8, 8) = (1.0 + a) / 2.0;
  m(6, 8) = m(8, 6) = std::sqrt(1.0 - a * a) / 2.0;
  return DensityMatrix::bipartite(m / (8.0 * a + 1.0), 3, 3);
}

inline DensityMatrix horodecki_noise(double t, double p) {
  require_unit_interval(p, "p");
  const DensityMatrix h = horodecki_3x3(t);
  return DensityMatrix::bipartite(p * h.mat() + (1.0 - p) / 9.0 * ComplexMatrix::Identity(9, 9), 3, 3);
}

// ---------------------------------------------------------------------------
// Coefficient matrix chi_{mu nu} = Tr[rho (Pi_mu (x) Pi_nu)]

struct ChiMatrix {
  int dim = 0;
  RealMatrix chi;

  /// chi'_{mu nu} = (d/2) chi_{mu 0} chi_{0 nu}
  RealMatrix chi_prime() const {
    return (dim / 2.0) * chi.col(0) * chi.row(0);
  }

  /// Generator-generator block (mu, nu >= 1).
  RealMatrix correlation_block() const {
    const int n = dim * dim - 1;
    return chi.bottomRightCorner(n, n);
  }
};

namespace detail {

// Column mu holds Pi_mu(j, i) at row i*d + j, so that
// chi = P^T R(rho) P with R the realignment.
inline ComplexMatrix vec_transposed_basis(const SuBasis& b) {
  const int d = b.dim;
  ComplexMatrix p(d * d, b.size());
  for (int mu = 0; mu < b.size(); ++mu)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) p(i * d + j, mu) = b[mu](j, i);
  return p;
}

}  // namespace detail

inline ChiMatrix chi_matrix(const DensityMatrix& rho) {
  if (!rho.is_bipartite() || rho.dim_a() != rho.dim_b()) {
    throw Error(ErrorCode::DimensionMismatch, "chi_matrix requires a bipartite state with equal local dimensions");
  }
  const int d = rho.dim_a();
  const ComplexMatrix p = detail::vec_transposed_basis(cached_basis(d));
  const ComplexMatrix r = realign(rho.mat(), d, d);
  ChiMatrix out;
  out.dim = d;
  out.chi = (p.transpose() * r * p).real();
  return out;
}

/// rho = (1/4) sum chi_{mu nu} Pi_mu (x) Pi_nu
inline ComplexMatrix assemble_from_chi(const ChiMatrix& c) {
  const SuBasis& b = cached_basis(c.dim);
  const int n = c.dim * c.dim;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int mu = 0; mu < b.size(); ++mu)
    for (int nu = 0; nu < b.size(); ++nu)
      if (c.chi(mu, nu) != 0.0) m += 0.25 * c.chi(mu, nu) * kron(b[mu], b[nu]);
  return m;
}

// ---------------------------------------------------------------------------
// Normal form under local filtering

struct NormalForm {
  DensityMatrix state;
  ComplexMatrix filter_a;  // state ~ (A (x) B) rho (A (x) B)^dagger
  ComplexMatrix filter_b;
  int iterations = 0;
  double deviation = 0.0;  // max entry distance of the marginals from 1/d
};

inline double marginal_deviation(const ComplexMatrix& m, int dim_a, int dim_b) {
  const ComplexMatrix ra = partial_trace(m, dim_a, dim_b, Subsystem::A);
  const ComplexMatrix rb = partial_trace(m, dim_a, dim_b, Subsystem::B);
  return std::max(max_abs((ra - ComplexMatrix::Identity(dim_a, dim_a) / double(dim_a)).eval()),
                  max_abs((rb - ComplexMatrix::Identity(dim_b, dim_b) / double(dim_b)).eval()));
}

inline NormalForm normal_form(const DensityMatrix& rho, const Tolerance& tol = {}, int max_iter = 500) {
  if (!rho.is_bipartite()) throw Error(ErrorCode::InvalidInput, "normal_form requires a bipartite state");
  const int da = rho.dim_a();
  const int db = rho.dim_b();
  ComplexMatrix m = rho.mat();
  ComplexMatrix fa = ComplexMatrix::Identity(da, da);
  ComplexMatrix fb = ComplexMatrix::Identity(db, db);

  auto filter = [&](const ComplexMatrix& marg, int d) {
    const RealVector ev = hermitian_eigenvalues(marg, tol);
    if (ev(d - 1) <= tol.eps_rank * std::max(ev(0), 1e-300)) {
      throw Error(ErrorCode::RankDeficientMarginal,
                  "marginal eigenvalue " + std::to_string(ev(d - 1)));
    }
    return inv_sqrtm_psd((d * marg).eval(), tol);
  };

  int it = 0;
  double dev = marginal_deviation(m, da, db);
  while (dev >= tol.eps_conv) {
    if (it == max_iter) {
      throw Error(ErrorCode::NoConvergence,
                  "normal form deviation " + std::to_string(dev) + " after " + std::to_string(it) + " iterations");
    }
    const ComplexMatrix a = filter(partial_trace(m, da, db, Subsystem::A), da);
    const ComplexMatrix b = filter(partial_trace(m, da, db, Subsystem::B), db);
    const ComplexMatrix ab = kron(a, b);
    m = ab * m * ab.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    m /= m.trace().real();
    fa = a * fa;
    fb = b * fb;
    ++it;
    dev = marginal_deviation(m, da, db);
  }
  NormalForm out{DensityMatrix::bipartite(m, da, db, tol), fa, fb, it, dev};
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

struct PptResult {
  bool positive = true;
  double min_eigenvalue = 0.0;
};

inline PptResult ppt_positive(const DensityMatrix& rho, const Tolerance& tol = {}) {
  if (!rho.is_bipartite()) throw Error(ErrorCode::InvalidInput, "ppt_positive requires a bipartite state");
  const ComplexMatrix pt = partial_transpose(rho.mat(), rho.dim_a(), rho.dim_b());
  const RealVector ev = hermitian_eigenvalues(pt, tol);
  const double lo = ev(ev.size() - 1);
  return {lo >= -tol.eps_psd, lo};
}

/// Trace norm of the realigned matrix; values above 1 certify entanglement.
inline double realignment_norm(const DensityMatrix& rho) {
  if (!rho.is_bipartite()) throw Error(ErrorCode::InvalidInput, "realignment_norm requires a bipartite state");
  return trace_norm(realign(rho.mat(), rho.dim_a(), rho.dim_b()));
}

struct HorodeckiCheck {
  bool ppt_everywhere = true;
  double worst_pt_eigenvalue = 0.0;
  bool ccnr_detects_some = false;
  double best_realignment_norm = 0.0;
};

/// PPT on t = 0.05, 0.10, ..., 0.95 and realignment detection somewhere on it.
inline HorodeckiCheck horodecki_self_check() {
  HorodeckiCheck c;
  for (int i = 1; i < 20; ++i) {
    const DensityMatrix h = horodecki_3x3(0.05 * i);
    const PptResult p = ppt_positive(h);
    c.ppt_everywhere = c.ppt_everywhere && p.positive;
    c.worst_pt_eigenvalue = i == 1 ? p.min_eigenvalue : std::min(c.worst_pt_eigenvalue, p.min_eigenvalue);
    const double r = realignment_norm(h);
    c.best_realignment_norm = std::max(c.best_realignment_norm, r);
  }
  c.ccnr_detects_some = c.best_realignment_norm > 1.0 + 1e-9;
  return c;
}

}  // namespace qorrelate

#endif  // QORRELATE_QSTATE_HPP

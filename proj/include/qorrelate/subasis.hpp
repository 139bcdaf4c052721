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

#ifndef QORRELATE_SUBASIS_HPP
#define QORRELATE_SUBASIS_HPP

#include <qorrelate/matkernel.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace qorrelate {

// Orthogonal Hermitian operator basis {Pi_0, pi_1, ..., pi_{d^2-1}} with
// Tr[Pi_mu Pi_nu] = 2 delta_mu_nu and Pi_0 = sqrt(2/d) 1.
//
// Generator order (stable; serialized coefficient vectors depend on it):
//   1. symmetric   E_jk + E_kj          for j < k, lexicographic
//   2. antisym.  -iE_jk + iE_kj         for j < k, lexicographic
//   3. diagonal  sqrt(2/(l(l+1))) diag(1,...,1,-l,0,...,0), l = 1..d-1
// For d = 2 this is (sigma_x, sigma_y, sigma_z).
struct SuBasis {
  int dim = 0;
  ComplexMatrix pi0;
  std::vector<ComplexMatrix> generators;

  int size() const { return dim * dim; }

  /// Pi_mu with mu = 0 the identity component.
  const ComplexMatrix& operator[](int mu) const { return mu == 0 ? pi0 : generators[mu - 1]; }
};

inline SuBasis gell_mann_basis(int d) {
  if (d < 2) throw Error(ErrorCode::DimensionTooSmall, "basis dimension must be >= 2");
  SuBasis b;
  b.dim = d;
  b.pi0 = std::sqrt(2.0 / d) * ComplexMatrix::Identity(d, d);
  b.generators.reserve(d * d - 1);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      b.generators.push_back(std::move(m));
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = cplx(0.0, -1.0);
      m(k, j) = cplx(0.0, 1.0);
      b.generators.push_back(std::move(m));
    }
  }
  for (int l = 1; l < d; ++l) {
    const double c = std::sqrt(2.0 / (l * (l + 1.0)));
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < l; ++i) m(i, i) = c;
    m(l, l) = -c * l;
    b.generators.push_back(std::move(m));
  }
  return b;
}

/// Process-wide memoized basis; the returned reference stays valid for the
/// lifetime of the program.
inline const SuBasis& cached_basis(int d) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<SuBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it == cache.end()) {
    it = cache.emplace(d, std::make_unique<SuBasis>(gell_mann_basis(d))).first;
  }
  return *it->second;
}

// Rank-3 tensors indexed over generators only (0-based, i.e. generator k is
// pi_{k+1}).
struct StructureConstants {
  int n = 0;
  std::vector<double> f;
  std::vector<double> g;

  double F(int a, int b, int c) const { return f[(a * n + b) * n + c]; }
  double G(int a, int b, int c) const { return g[(a * n + b) * n + c]; }
};

inline StructureConstants structure_constants(const SuBasis& basis) {
  StructureConstants sc;
  const int n = basis.size() - 1;
  sc.n = n;
  sc.f.assign(static_cast<size_t>(n) * n * n, 0.0);
  sc.g.assign(static_cast<size_t>(n) * n * n, 0.0);
  const cplx four_i(0.0, 4.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const ComplexMatrix ab = basis.generators[a] * basis.generators[b];
      const ComplexMatrix ba = basis.generators[b] * basis.generators[a];
      const ComplexMatrix comm = ab - ba;
      const ComplexMatrix anti = ab + ba;
      for (int c = 0; c < n; ++c) {
        const size_t idx = (static_cast<size_t>(a) * n + b) * n + c;
        sc.f[idx] = (trace_product(comm, basis.generators[c]) / four_i).real();
        sc.g[idx] = (trace_product(anti, basis.generators[c]) / 4.0).real();
      }
    }
  }
  return sc;
}

/// n_mu = Tr[X Pi_mu] / 2, length d^2.
inline RealVector expand_observable(const ComplexMatrix& x, const SuBasis& basis,
                                    const Tolerance& tol = {}) {
  if (x.rows() != basis.dim || x.cols() != basis.dim) {
    throw Error(ErrorCode::DimensionMismatch, "observable dimension differs from basis");
  }
  require_finite(x, "observable");
  require_hermitian(x, tol, "observable");
  RealVector n(basis.size());
  for (int mu = 0; mu < basis.size(); ++mu) n(mu) = 0.5 * trace_product(x, basis[mu]).real();
  return n;
}

inline ComplexMatrix assemble_observable(const RealVector& n, const SuBasis& basis) {
  if (n.size() != basis.size()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector length must be d^2");
  }
  ComplexMatrix x = ComplexMatrix::Zero(basis.dim, basis.dim);
  for (int mu = 0; mu < basis.size(); ++mu) x += n(mu) * basis[mu];
  return x;
}

/// Sum_k c_k pi_k over generators only (Bloch-type vectors of length d^2-1).
inline ComplexMatrix assemble_traceless(const RealVector& c, const SuBasis& basis) {
  if (c.size() != basis.size() - 1) {
    throw Error(ErrorCode::DimensionMismatch, "traceless coefficient vector length must be d^2-1");
  }
  ComplexMatrix x = ComplexMatrix::Zero(basis.dim, basis.dim);
  for (int k = 0; k < c.size(); ++k) x += c(k) * basis.generators[k];
  return x;
}

}  // namespace qorrelate

#endif  // QORRELATE_SUBASIS_HPP

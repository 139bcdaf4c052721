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

// Tomography of a random qutrit from SIC-type expectation values, then the
// same data fed to the general pseudo-inverse reconstruction.

#include <qorrelate/qorrelate.hpp>

#include <cstdio>

int main() {
  using namespace qorrelate;
  const int d = 3;
  const Measurement sic = sic_scm(d);
  const DensityMatrix rho = random_hs(d, 7);
  const RealVector x = expectation_vector(rho, sic);

  const ScmReconstruction r = reconstruct_scm(x, sic);
  const DensityMatrix general = reconstruct_general(x, sic);
  std::printf("purity            %.12f\n", purity(rho));
  std::printf("purity (moments)  %.12f\n", purity_from_moments(x, sic));
  std::printf("scm formula error %.3e\n", max_abs((r.matrix - rho.mat()).eval()));
  std::printf("pinv error        %.3e\n", max_abs((general.mat() - rho.mat()).eval()));
  std::printf("uncertainty bound %.12f (%s)\n", uncertainty_bound(sic).value, uncertainty_bound(sic).method.c_str());
  return 0;
}

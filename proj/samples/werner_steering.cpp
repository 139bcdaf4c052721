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

// Steering of two-qubit Werner states seen through two coplanar dichotomic
// settings per side. Prints the bisected threshold p* against the angle.

#include <qorrelate/qorrelate.hpp>

#include <cmath>
#include <cstdio>

int main() {
  using namespace qorrelate;
  std::printf("%10s %12s %12s\n", "delta", "p*", "analytic");
  for (double delta : linspace(M_PI / 12, 11 * M_PI / 12, 11)) {
    const Measurement x = dichotomy(delta);
    std::printf("%10.6f %12.8f %12.8f\n", delta, werner_threshold(x, x), werner_analytic_threshold(delta));
  }
  const Measurement om = orthogonal_measurement(2);
  std::printf("orthogonal measurement: p* = %.8f\n", werner_threshold(om, om));
  return 0;
}

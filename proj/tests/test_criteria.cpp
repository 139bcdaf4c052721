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

// Unit tests for criteria, experiments and the JSON layer.

#include <gtest/gtest.h>

#include <qorrelate/criteria.hpp>
#include <qorrelate/experiments.hpp>
#include <qorrelate/io.hpp>

#include "oracles.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace qorrelate {
namespace {

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no qorrelate::Error thrown";
  return ErrorCode::InvalidInput;
}

// ---------------------------------------------------------------------------
// correlation matrices

TEST(Correlations, EntriesMatchDirectExpectations) {
  const DensityMatrix rho = random_hs(3, 3, 2);
  const Measurement xa = sic_scm(3);
  const Measurement xb = scaled_gell_mann(3, 0.5);
  const std::vector<ComplexMatrix> first9(xb.observables().begin(), xb.observables().begin() + 9);
  const CorrelationMatrices c = correlations(rho, xa, Measurement::from_observables(first9), CrossCheck::Always);
  EXPECT_TRUE(c.cross_checked);
  EXPECT_LT(c.cross_residual, 1e-10);
  for (int mu = 0; mu < 9; ++mu) {
    for (int nu = 0; nu < 9; ++nu) {
      const double e = oracle::expect(rho.mat(), oracle::kron(xa[mu], xb[nu]));
      EXPECT_NEAR(c.C(mu, nu), e, 1e-13);
      const double ea = oracle::expect(oracle::trace_out_b(rho.mat(), 3, 3), xa[mu]);
      const double eb = oracle::expect(oracle::trace_out_a(rho.mat(), 3, 3), xb[nu]);
      EXPECT_NEAR(c.gamma(mu, nu), ea * eb - e, 1e-13);
    }
  }
}

TEST(Correlations, UnequalDimensionsSkipChiPath) {
  const DensityMatrix rho = random_hs(2, 3, 4);
  const Measurement xa = orthogonal_measurement(2);
  const Measurement xb = Measurement::from_observables(
      {orthogonal_measurement(3)[0], orthogonal_measurement(3)[1], orthogonal_measurement(3)[2],
       orthogonal_measurement(3)[3]});
  const CorrelationMatrices c = correlations(rho, xa, xb, CrossCheck::Always);
  EXPECT_FALSE(c.cross_checked);
  EXPECT_NEAR(c.C(1, 2), oracle::expect(rho.mat(), oracle::kron(xa[1], xb[2])), 1e-13);
  EXPECT_EQ(code_of([&] { correlations(rho, xa, orthogonal_measurement(3)); }), ErrorCode::DimensionMismatch);
}

// ---------------------------------------------------------------------------
// entanglement criteria

TEST(Entanglement, BellDiagonalCorrelationCriterion) {
  // For Pauli triples C = diag(t); ||C||_tr = sum |t|, kappa = 1 per side.
  const std::array<double, 3> t{-0.5, -0.4, -0.3};
  const CriterionVerdict v = ent_criterion_C(bell_diagonal(t), pauli(), pauli());
  EXPECT_NEAR(v.lhs, 1.2, 1e-12);
  EXPECT_NEAR(v.bound, 1.0, 1e-12);
  EXPECT_TRUE(v.detected);
  EXPECT_TRUE(oracle::two_qubit_entangled(oracle::bell_diagonal(t)));
}

TEST(Entanglement, SingletGammaCriterion) {
  const CriterionVerdict v = ent_criterion_gamma(werner(1.0), pauli(), pauli());
  EXPECT_NEAR(v.lhs, 3.0, 1e-12);
  EXPECT_NEAR(v.bound, 1.0, 1e-12);  // V_A = V_B = 3, S = 2
  EXPECT_TRUE(v.detected);
}

TEST(Entanglement, CcnrEquivalenceForOrthogonalMeasurement) {
  // With OM, ||C||_tr is the realignment norm.
  for (std::uint64_t s = 0; s < 5; ++s) {
    const DensityMatrix rho = random_hs(3, 3, s);
    const CriterionVerdict v = ent_criterion_C(rho, orthogonal_measurement(3), orthogonal_measurement(3));
    EXPECT_NEAR(v.lhs, realignment_norm(rho), 1e-10);
    EXPECT_NEAR(v.bound, 1.0, 1e-12);
  }
}

TEST(Entanglement, SeparableStatesNeverDetected) {
  Rng rng(77);
  const std::vector<Measurement> sets{pauli(), orthogonal_measurement(2), sic_scm(2), scaled_gell_mann(2, 0.3)};
  for (int i = 0; i < 40; ++i) {
    const DensityMatrix rho = random_separable(2, 2, 1 + i % 6, rng);
    for (const auto& x : sets) {
      EXPECT_FALSE(ent_criterion_C(rho, x, x).detected);
      EXPECT_FALSE(ent_criterion_gamma(rho, x, x).detected);
      EXPECT_FALSE(lur_criterion(rho, x, x).detected);
    }
    // Filtering converges only for full-rank states.
    if (1 + i % 6 >= 4) {
      EXPECT_FALSE(normalform_criterion(rho, NormalFormVariant::C_nf).detected);
      EXPECT_FALSE(normalform_criterion(rho, NormalFormVariant::gamma_nf).detected);
    }
  }
}

TEST(Entanglement, LurEqualsGammaVerdict) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const DensityMatrix rho = random_hs(2, 2, s);
    const CriterionVerdict g = ent_criterion_gamma(rho, pauli(), pauli());
    const CriterionVerdict l = lur_criterion(rho, pauli(), pauli());
    EXPECT_EQ(g.detected, l.detected);
    EXPECT_NEAR(l.margin, 2.0 * g.margin, 1e-12);
  }
}

TEST(Entanglement, OptimalWitnessExpectation) {
  const DensityMatrix rho = werner(0.9);
  const OptimalWitness w = optimal_witness(rho, pauli(), pauli());
  const CriterionVerdict c = ent_criterion_C(rho, pauli(), pauli());
  EXPECT_NEAR(w.expectation, c.bound - c.lhs, 1e-10);
  EXPECT_NEAR(oracle::expect(rho.mat(), w.w), w.expectation, 1e-12);
  // Nonnegative on product states.
  std::mt19937 gen(5);
  for (int i = 0; i < 50; ++i) {
    const ComplexMatrix prod = oracle::kron(oracle::random_pure(2, gen), oracle::random_pure(2, gen));
    EXPECT_GE(oracle::expect(prod, w.w), -1e-10);
  }
}

TEST(Entanglement, NormalFormCriteria) {
  const CriterionVerdict c = normalform_criterion(bell_diagonal({-0.8, -0.8, -0.8}), NormalFormVariant::C_nf);
  EXPECT_NEAR(c.lhs, 2.4, 1e-10);
  EXPECT_NEAR(c.bound, 1.0, 1e-14);
  EXPECT_TRUE(c.detected);
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  const CriterionVerdict r = normalform_criterion(DensityMatrix::bipartite(m, 2, 2), NormalFormVariant::C_nf);
  EXPECT_FALSE(r.detected);
  EXPECT_NE(r.notes.find("rank-deficient"), std::string::npos);
  EXPECT_EQ(code_of([] { normalform_criterion(random_hs(2, 3, 1), NormalFormVariant::C_nf); }),
            ErrorCode::DimensionMismatch);
  // The chi' - chi form equals the OM gamma criterion.
  const DensityMatrix rho = random_hs(3, 3, 6);
  const CriterionVerdict g = normalform_criterion(rho, NormalFormVariant::gamma_nf);
  const CriterionVerdict om = ent_criterion_gamma(rho, orthogonal_measurement(3), orthogonal_measurement(3));
  EXPECT_NEAR(g.lhs, 2.0 * om.lhs, 1e-10);
  EXPECT_NEAR(g.bound, 2.0 * om.bound, 1e-10);
}

// ---------------------------------------------------------------------------
// steering criteria

TEST(Steering, WernerWithOrthogonalMeasurement) {
  const Measurement om = orthogonal_measurement(2);
  EXPECT_FALSE(steer_criterion_C(werner(0.5), om, om).detected);
  EXPECT_TRUE(steer_criterion_C(werner(0.7), om, om).detected);
  const double p = werner_threshold(om, om);
  EXPECT_NEAR(p, werner_om_reference_threshold(), 1e-9);
}

TEST(Steering, ScalarXiMatchesVectorXi) {
  const DensityMatrix rho = random_hs(2, 2, 19);
  for (double xi : {0.3, 1.0, 1.7}) {
    const CriterionVerdict s = steer_criterion_gamma(rho, pauli(), pauli(), xi);
    const CriterionVerdict v = steer_criterion_gamma(rho, pauli(), pauli(), RealVector::Constant(3, xi));
    // The constant-vector form is xi times the scalar form.
    EXPECT_NEAR(v.lhs, xi * s.lhs, 1e-12);
    EXPECT_NEAR(v.bound, xi * s.bound, 1e-12);
  }
  EXPECT_EQ(code_of([&] { steer_criterion_gamma(rho, pauli(), pauli(), 0.0); }), ErrorCode::NonpositiveXi);
  EXPECT_EQ(code_of([&] { steer_criterion_gamma(rho, pauli(), pauli(), RealVector::Ones(2)); }),
            ErrorCode::DimensionMismatch);
}

TEST(Steering, SteerLurMatchesGammaAtUnitXi) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const DensityMatrix rho = random_hs(2, 2, 100 + s);
    const CriterionVerdict g = steer_criterion_gamma(rho, pauli(), pauli(), 1.0);
    const CriterionVerdict l = steer_lur(rho, pauli(), pauli());
    EXPECT_EQ(g.detected, l.detected);
    EXPECT_NEAR(l.margin, 2.0 * g.margin, 1e-12);
  }
}

TEST(Steering, NormalFormVariantRequiresMaximallyMixedMarginals) {
  const DensityMatrix w = werner(0.9);
  const CriterionVerdict v = steer_criterion_nf(w, pauli(), pauli(), RealVector::Ones(3));
  const CriterionVerdict g = steer_criterion_gamma(w, pauli(), pauli(), RealVector::Ones(3));
  EXPECT_NEAR(v.lhs, g.lhs, 1e-12);
  EXPECT_NEAR(v.bound, g.bound, 1e-12);
  EXPECT_EQ(code_of([] { steer_criterion_nf(random_hs(2, 2, 1), pauli(), pauli(), RealVector::Ones(3)); }),
            ErrorCode::InvalidInput);
}

TEST(Steering, OptimizedXiIsAtLeastAsGoodAsGrid) {
  const DensityMatrix rho = werner(0.8);
  const XiOptimum o = optimize_xi(rho, pauli(), pauli());
  for (double xi : linspace(0.1, 3.0, 30)) {
    EXPECT_GE(o.verdict.margin, steer_criterion_gamma(rho, pauli(), pauli(), xi).margin - 1e-9);
  }
}

TEST(Steering, UnsteerableMixturesNotDetected) {
  // Product states admit a local hidden state model.
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    const DensityMatrix rho = random_separable(2, 2, 1 + i % 4, rng);
    EXPECT_FALSE(steer_criterion_C(rho, pauli(), pauli()).detected);
    EXPECT_FALSE(steer_criterion_gamma(rho, pauli(), pauli(), 1.0).detected);
    EXPECT_FALSE(steer_lur(rho, pauli(), pauli()).detected);
  }
}

// ---------------------------------------------------------------------------
// experiments

TEST(Experiments, LinspaceAndParallelFor) {
  const auto g = linspace(0.0, 1.0, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  std::vector<int> hit(100, 0);
  parallel_for(100, 4, [&](int i) { hit[i] += 1; });
  for (int h : hit) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3, [](int i) {
                 if (i == 7) throw Error(ErrorCode::InvalidInput, "boom");
               }),
               Error);
}

TEST(Experiments, ScansAreThreadCountInvariant) {
  const ScanResult a = scan_random_steering(300, linspace(0.2, 1.0, 5), 4, 1);
  const ScanResult b = scan_random_steering(300, linspace(0.2, 1.0, 5), 4, 3);
  EXPECT_EQ(to_csv(a.table), to_csv(b.table));
  const ScanResult h1 = scan_horodecki(linspace(0.2, 0.8, 3), linspace(0.995, 1.0, 3), 1);
  const ScanResult h2 = scan_horodecki(linspace(0.2, 0.8, 3), linspace(0.995, 1.0, 3), 2);
  EXPECT_EQ(to_csv(h1.table), to_csv(h2.table));
  EXPECT_EQ(to_csv(h1.curves), to_csv(h2.curves));
  EXPECT_NE(h1.svg.find("<svg"), std::string::npos);
}

TEST(Experiments, IsotropicThresholdMatchesFormula) {
  for (int d : {2, 3}) EXPECT_NEAR(isotropic_threshold(d), 1.0 / std::sqrt(d + 1.0), 1e-9);
}

TEST(Experiments, CsvFormatting) {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{0.1, 2.0}};
  EXPECT_EQ(to_csv(t), "a,b\n0.10000000000000001,2\n");
}

// ---------------------------------------------------------------------------
// io

TEST(Io, MatrixStateMeasurementRoundTrip) {
  const DensityMatrix rho = random_hs(2, 3, 5);
  const DensityMatrix back = state_from_json(json::parse(state_to_json(rho).dump()));
  EXPECT_EQ(back.dim_a(), 2);
  EXPECT_EQ(back.dim_b(), 3);
  EXPECT_LT(max_abs((back.mat() - rho.mat()).eval()), 1e-15);
  // A single 4x4 state stays single.
  const DensityMatrix s = random_hs(4, 1);
  EXPECT_FALSE(state_from_json(state_to_json(s)).is_bipartite());
  const Measurement x = sic_scm(3);
  const Measurement y = measurement_from_json(json::parse(measurement_to_json(x).dump()));
  EXPECT_EQ(y.label(), "sic");
  EXPECT_LT(max_abs((y.coeffs() - x.coeffs()).eval()), 1e-15);
}

TEST(Io, StateFamiliesAndPresets) {
  EXPECT_LT(max_abs((state_from_json(json::parse(R"({"family":"werner","p":0.3})")).mat() - oracle::werner(0.3))
                        .eval()),
            1e-15);
  EXPECT_EQ(state_from_json(json::parse(R"({"family":"random_hs","dims":[3],"seed":2})")).dim(), 3);
  EXPECT_EQ(state_from_json(json::parse(R"({"family":"random_hs","d":3})")).dim(), 9);
  EXPECT_EQ(measurement_from_json(json("om"), 3).size(), 9);
  EXPECT_EQ(measurement_from_json(json::parse(R"({"preset":"dichotomy","theta":1})")).size(), 2);
  EXPECT_EQ(code_of([] { state_from_json(json::parse(R"({"family":"nope"})")); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { measurement_from_json(json("om")); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { state_from_json(json::parse(R"({"family":"werner"})")); }), ErrorCode::InvalidInput);
}

TEST(Io, VerdictRoundTrip) {
  const CriterionVerdict v = ent_criterion_C(werner(0.9), pauli(), pauli());
  const CriterionVerdict w = verdict_from_json(json::parse(verdict_to_json(v).dump()));
  EXPECT_EQ(w.criterion, v.criterion);
  EXPECT_EQ(w.lhs, v.lhs);
  EXPECT_EQ(w.bound, v.bound);
  EXPECT_EQ(w.detected, v.detected);
  EXPECT_EQ(w.params.size(), v.params.size());
}

TEST(Io, ScanJsonUsesNullForNan) {
  Table t;
  t.columns = {"x"};
  t.rows = {{std::nan("")}};
  EXPECT_TRUE(table_to_json(t)["rows"][0][0].is_null());
}

}  // namespace
}  // namespace qorrelate

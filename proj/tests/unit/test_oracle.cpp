/**
 * Copyright 2026 The mmgauss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "mmg/elements.hpp"
#include "mmg/equivalence.hpp"
#include "mmg/error.hpp"
#include "mmg/hhom.hpp"
#include "mmg/oracle.hpp"
#include "test_util.hpp"

namespace mmg::oracle {
namespace {

Occupation occ2(int a, int b) { return with_added(with_added(0, 0, a), 1, b); }

FockState two_mode_state(int a, int b) {
  FockState s(ModeLayout(2, 1), 4);
  s.branches()[0].amplitudes = {{occ2(a, b), 1.0}};
  return s;
}

TEST(FockFromJsa, VacuumAndPairAmplitudes) {
  const ModeLayout layout(2, 1);
  const FockState vac = fock_from_jsa(test::single_bin_jsa(0.0), 0, 1, layout, 6);
  EXPECT_NEAR(std::abs(vac.amplitude(0) - Complex(1.0)), 0.0, 1e-15);

  const double r = 0.5;
  const FockState st = fock_from_jsa(test::single_bin_jsa(r), 0, 1, layout, 12);
  const double sech = 1.0 / std::cosh(r);
  for (int n = 0; n <= 6; ++n) {
    const Complex expected = sech * std::pow(Complex(0.0, -std::tanh(r)), n);
    EXPECT_NEAR(std::abs(st.amplitude(occ2(n, n)) - expected), 0.0, 1e-14) << n;
  }
  EXPECT_EQ(st.amplitude(occ2(1, 0)), Complex(0.0));
}

TEST(FockFromJsa, TruncationDeficitIsGeometricTail) {
  // Cutoff 16 photons keeps up to 8 pairs; the remainder is tanh^18.
  const double r = 0.5;
  const FockState st = fock_from_jsa(test::single_bin_jsa(r), 0, 1, ModeLayout(2, 1), 16);
  const double tail = std::pow(std::tanh(r), 18);
  EXPECT_NEAR(st.truncation_deficit(), tail, 1e-14);
  EXPECT_LT(st.truncation_deficit(), 3e-6);
}

TEST(ApplyPassiveFock, IdentityHomAndLoss) {
  const FockState one_one = two_mode_state(1, 1);
  const FockState same = apply_passive_fock(one_one, CMatrix::Identity(2, 2));
  EXPECT_NEAR(std::abs(same.amplitude(occ2(1, 1)) - Complex(1.0)), 0.0, 1e-15);

  const ModeLayout layout(2, 1);
  const FockState hom = apply(one_one, beam_splitter(kPi / 4, {0, 1}, layout));
  EXPECT_NEAR(std::abs(hom.amplitude(occ2(1, 1))), 0.0, 1e-15);
  EXPECT_NEAR(std::norm(hom.amplitude(occ2(2, 0))), 0.5, 1e-15);
  EXPECT_NEAR(std::norm(hom.amplitude(occ2(0, 2))), 0.5, 1e-15);

  const double eps = 0.3;
  const FockState lossy = apply_passive_fock(two_mode_state(1, 0), CMatrix{{std::sqrt(1 - eps), 0}, {0, 1}});
  EXPECT_NEAR(fock_detection(lossy, DetectionPattern::pnr({0}, {1})), 1 - eps, 1e-15);
  EXPECT_NEAR(fock_detection(lossy, DetectionPattern::pnr({0}, {0})), eps, 1e-15);
  EXPECT_THROW(apply_passive_fock(one_one, CMatrix::Identity(3, 3)), DimensionError);
}

TEST(ApplyPassiveFock, UnitaryPreservesNorm) {
  const ModeLayout layout(3, 2);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  JsaMatrix j{CMatrix(2, 2), FrequencyGrid(test::kCenter, 1e10, 2), FrequencyGrid(test::kCenter, 1e10, 2)};
  for (int c = 0; c < 2; ++c) {
    for (int r = 0; r < 2; ++r) j.f(r, c) = Complex(g(rng), g(rng));
  }
  j.f *= 0.4 / j.f.norm();
  const FockState st = fock_from_jsa(j, 0, 2, layout, 8);
  CMatrix h(6, 6);
  for (int c = 0; c < 6; ++c) {
    for (int r = 0; r < 6; ++r) h(r, c) = Complex(g(rng), g(rng));
  }
  const CMatrix u = expm(kI * 0.5 * (h + h.adjoint()));
  EXPECT_NEAR(apply_passive_fock(st, u).norm_squared(), st.norm_squared(), 1e-12);
}

TEST(FockDetection, VacuumAndTms) {
  const FockState vac(ModeLayout(2, 2), 4);
  EXPECT_EQ(fock_detection(vac, DetectionPattern::pnr({0, 1}, {1, 0})), 0.0);
  EXPECT_EQ(fock_detection(vac, DetectionPattern::threshold({1}, {Click::off})), 1.0);
  const FockState st = fock_from_jsa(test::single_bin_jsa(0.5), 0, 1, ModeLayout(2, 1), 40);
  EXPECT_NEAR(fock_detection(st, DetectionPattern::pnr({0, 1}, {1, 1})), 0.16794769627868074, 1e-14);
}

TEST(HeraldedPurity, MatchesSchmidtFormula) {
  const std::vector<double> values{0.5, 0.3, 0.1};
  const JsaMatrix j = test::diagonal_jsa(values);
  const FockState st = fock_from_jsa(j, 0, 1, ModeLayout(2, 3), 14);
  RVector v(3);
  v << 0.5, 0.3, 0.1;
  EXPECT_NEAR(heralded_purity(st, 0, 1), analytic_heralded_purity(v), 1e-6);
}

TEST(Equivalence, RandomCircuitsAgree) {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 3; ++k) {
    const Circuit c = random_circuit(rng, {.max_spatial = 3, .max_spectral = 2, .max_xi = 0.3});
    const Agreement a = compare_with_gaussian(c, 4, 5e-7);
    EXPECT_LT(a.max_deviation, 1e-6) << c.description << " worst " << a.worst_pattern;
    EXPECT_LT(a.truncation_deficit, 5e-7);
    EXPECT_GT(a.patterns, 0);
  }
}

}  // namespace
}  // namespace mmg::oracle

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
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "mmg/elements.hpp"
#include "mmg/error.hpp"
#include "mmg/hhom.hpp"
#include "test_util.hpp"

namespace mmg {
namespace {

JsaSpec source(JsaModel model, double xi) {
  JsaSpec s;
  s.model = model;
  s.xi = xi;
  s.bandwidth = 1e11;
  s.signal_center = s.idler_center = test::kCenter;
  if (model == JsaModel::waveguide) s.walk_off = 29e-12;
  return s;
}

HhomConfig config(JsaModel model, double xi) {
  HhomConfig c;
  c.source_a = c.source_b = source(model, xi);
  c.grid = FrequencyGrid::spanning(test::kCenter, 4e11, 33);
  return c;
}

// The same circuit put together by hand, with the delay on either idler and
// with loss optionally ahead of the filter.
CovarianceState assemble(const HhomConfig& c, int delay_mode, double tau, bool loss_first) {
  const ModeLayout layout(4, c.grid.n_bins());
  CovarianceState st = vacuum_state(layout);
  st = apply(st, squeezer(build_jsa(c.source_a, c.grid), 0, 1, layout));
  st = apply(st, squeezer(build_jsa(c.source_b, c.grid), 3, 2, layout));
  st = apply(st, delay(tau, delay_mode, c.grid, layout));
  auto filt = [&](const CovarianceState& s) {
    return c.filter ? apply(s, bandpass_filter(c.filter->center, c.filter->half_width,
                                               c.filter->modes, c.grid, layout))
                    : s;
  };
  auto lose = [&](CovarianceState s) {
    for (int i = 0; i < 4; ++i) s = apply(s, loss(c.loss[i], std::array<int, 1>{i}, layout));
    return s;
  };
  st = loss_first ? filt(lose(st)) : lose(filt(st));
  return apply(st, beam_splitter(c.bs_angle, {1, 2}, layout));
}

TEST(BuildHhom, ZeroSqueezingIsVacuum) {
  const CovarianceState st = build_hhom(config(JsaModel::gaussian, 0.0));
  EXPECT_LT(max_abs(st.sigma() - CMatrix::Identity(st.layout().dim(), st.layout().dim())), 1e-15);
  EXPECT_EQ(four_fold(st, Detector::pnr), 0.0);
  EXPECT_EQ(four_fold(st, Detector::threshold), 0.0);
  EXPECT_EQ(bunching(st, Detector::threshold), 0.0);
  EXPECT_EQ(heralding_rate(st, Detector::pnr), 0.0);
}

TEST(BuildHhom, NoBeamSplitterFactorizes) {
  HhomConfig c = config(JsaModel::waveguide, 0.5);
  c.bs_angle = 0.0;
  const CovarianceState st = build_hhom(c);
  const int n = c.grid.n_bins();
  // Rows of source A's modes against columns of source B's modes vanish.
  for (int a : {0, 1}) {
    for (int b : {2, 3}) {
      for (int w = 0; w < n; ++w) {
        for (int v = 0; v < n; ++v) {
          const int i = st.layout().annihilation_index(a, w);
          const int j = st.layout().annihilation_index(b, v);
          EXPECT_EQ(st.sigma()(i, j), Complex(0.0));
          EXPECT_EQ(st.sigma()(i, j + st.layout().n_modes()), Complex(0.0));
        }
      }
    }
  }
}

TEST(BuildHhom, MatchesHandAssembledCircuit) {
  HhomConfig c = config(JsaModel::waveguide, 0.4);
  c.source_b.xi = 0.3;
  c.delay = 1.3e-12;
  c.loss = {0.1, 0.2, 0.05, 0.3};
  c.filter = BandpassSpec{test::kCenter, 2e11, {0, 1, 2, 3}};
  c.bs_angle = 0.5;
  const CovarianceState ref = build_hhom(c);
  EXPECT_LT(max_abs(assemble(c, 1, c.delay, false).sigma() - ref.sigma()), 1e-12);
  // Filter and loss are both diagonal here, so their order is immaterial.
  EXPECT_LT(max_abs(assemble(c, 1, c.delay, true).sigma() - ref.sigma()), 1e-12);
  // A delay on the other idler with the opposite sign differs only by a common
  // delay on both idlers, which no detection probability sees.
  const CovarianceState other = assemble(c, 2, -c.delay, false);
  for (Detector d : {Detector::pnr, Detector::threshold}) {
    const Coincidences a = coincidences(ref, d);
    const Coincidences b = coincidences(other, d);
    EXPECT_NEAR(a.four_fold, b.four_fold, 1e-12);
    EXPECT_NEAR(a.bunching, b.bunching, 1e-12);
  }
}

TEST(Coincidences, IdenticalPureSourcesBunchCompletely) {
  const CovarianceState st = build_hhom(config(JsaModel::gaussian, 0.6));
  EXPECT_NEAR(four_fold(st, Detector::pnr), 0.0, 1e-12);
  const std::array<int, 4> all{0, 1, 2, 3};
  const double left = p_pnr(st, all, std::array<int, 4>{1, 2, 0, 1});
  const double right = p_pnr(st, all, std::array<int, 4>{1, 0, 2, 1});
  EXPECT_NEAR(left, right, 1e-10);
  HhomConfig c0 = config(JsaModel::gaussian, 0.6);
  c0.bs_angle = 0.0;
  const Coincidences at0 = coincidences(build_hhom(c0), Detector::pnr);
  EXPECT_NEAR(bunching(st, Detector::pnr), at0.four_fold + at0.bunching, 1e-10);
  EXPECT_NEAR(bunching(st, Detector::pnr), left + right, 1e-12);
}

TEST(Coincidences, ThresholdCountsAtLeastPnr) {
  HhomConfig c = config(JsaModel::waveguide, 0.7);
  for (double tau : {0.0, 2e-12, 8e-12}) {
    c.delay = tau;
    const CovarianceState st = build_hhom(c);
    EXPECT_GE(four_fold(st, Detector::threshold), four_fold(st, Detector::pnr));
  }
}

TEST(HeraldingRate, SingleSchmidtClosedFormAndThresholdMonotone) {
  double last = 0.0;
  for (double r : {0.2, 0.5, 0.9, 1.3}) {
    const CovarianceState st = build_hhom(config(JsaModel::gaussian, r));
    const double s2 = test::sech2(r), t2 = std::tanh(r) * std::tanh(r);
    EXPECT_NEAR(heralding_rate(st, Detector::pnr), s2 * t2 * s2 * t2, 1e-12);
    const double thr = heralding_rate(st, Detector::threshold);
    EXPECT_NEAR(thr, t2 * t2, 1e-12);
    EXPECT_GT(thr, last);
    last = thr;
  }
}

TEST(HeraldingEfficiency, LosslessUnityAndDeadIdlers) {
  HhomConfig c = config(JsaModel::waveguide, 0.6);
  for (Detector d : {Detector::pnr, Detector::threshold}) {
    c.detector = d;
    const HeraldingEfficiency e = heralding_efficiency(c);
    if (d == Detector::pnr) {
      EXPECT_NEAR(e.efficiency, 1.0, 1e-10);
    }
    EXPECT_LT(e.theta_drift, 1e-8);
  }
  c.detector = Detector::pnr;
  c.loss = {0.0, 1.0, 1.0, 0.0};
  EXPECT_NEAR(heralding_efficiency(c).efficiency, 0.0, 1e-15);
  HhomConfig dark = config(JsaModel::gaussian, 0.0);
  EXPECT_THROW(heralding_efficiency(dark), InvalidArgument);
}

TEST(Visibility, Definitions) {
  EXPECT_DOUBLE_EQ(visibility_hom(0.0, 0.3), 1.0);
  EXPECT_DOUBLE_EQ(visibility_hom(0.15, 0.3), 0.5);
  EXPECT_DOUBLE_EQ(visibility_mzi(0.2, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(visibility_mzi(0.2, 0.2), 0.0);
  RVector one(1);
  one << 0.7;
  EXPECT_DOUBLE_EQ(analytic_heralded_purity(one), 1.0);
  RVector two(2);
  two << 0.4, 0.4;
  EXPECT_NEAR(analytic_heralded_purity(two), 0.5, 1e-15);
  EXPECT_NEAR(squeezing_db(0.9), 7.8173, 1e-4);
}

TEST(Plateau, ConvergedAtLargeDelay) {
  HhomConfig c = config(JsaModel::waveguide, 0.5);
  const Plateau coarse = four_fold_plateau(c);
  EXPECT_GT(coarse.p4, 0.0);
  // Halving the bin spacing doubles the plateau delay.
  c.grid = FrequencyGrid::spanning(test::kCenter, 4e11, 65);
  const Plateau p = four_fold_plateau(c);
  EXPECT_LT(p.drift, 1e-6 * p.p4);
  EXPECT_LT(p.drift, coarse.drift);
  EXPECT_GT(plateau_delay(c.grid), 10.0 / 1e11);
}

TEST(RatioR, BothOrderingsLowPowerLimit) {
  HhomConfig c = config(JsaModel::gaussian, 0.05);
  const RatioR r = ratio_R(c);
  EXPECT_NEAR(r.max_over_plateau * r.plateau_over_max, 1.0, 1e-12);
  EXPECT_NEAR(r.max_over_plateau, 2.0, 0.04);
}

TEST(SourceExchange, RelabelingLeavesProbabilitiesUnchanged) {
  HhomConfig c = config(JsaModel::waveguide, 0.6);
  c.source_b = source(JsaModel::gaussian, 0.4);
  c.loss = {0.1, 0.2, 0.3, 0.4};
  c.bs_angle = 0.7;
  HhomConfig s = c;
  std::swap(s.source_a, s.source_b);
  s.loss = {0.4, 0.3, 0.2, 0.1};
  const CovarianceState a = build_hhom(c);
  const CovarianceState b = build_hhom(s);
  for (Detector d : {Detector::pnr, Detector::threshold}) {
    const Coincidences x = coincidences(a, d);
    const Coincidences y = coincidences(b, d);
    EXPECT_NEAR(x.four_fold, y.four_fold, 1e-10);
    EXPECT_NEAR(x.bunching, y.bunching, 1e-10);
    EXPECT_NEAR(heralding_rate(a, d), heralding_rate(b, d), 1e-10);
  }
}

TEST(SpsInvariance, IndependentOfBeamSplitterAngle) {
  HhomConfig c = config(JsaModel::waveguide, 0.8);
  c.loss = {0.1, 0.3, 0.2, 0.05};
  for (Detector d : {Detector::pnr, Detector::threshold}) {
    c.bs_angle = 0.0;
    const Coincidences ref = coincidences(build_hhom(c), d);
    for (double theta : {0.3, kPi / 4, 1.2}) {
      c.bs_angle = theta;
      const Coincidences x = coincidences(build_hhom(c), d);
      EXPECT_NEAR(x.four_fold + x.bunching, ref.four_fold + ref.bunching, 1e-8);
    }
  }
}

TEST(Sweep, EmptyOrderedAndPureVisibility) {
  HhomConfig c = config(JsaModel::gaussian, 0.3);
  EXPECT_TRUE(sweep(c, SweepAxis::squeezing, {}).rows.empty());
  const SweepResult r = sweep(c, SweepAxis::squeezing, {0.2, 0.9, 0.5}, 2);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.rows[0].value, 0.2);
  EXPECT_EQ(r.rows[1].value, 0.9);
  for (const SweepRow& row : r.rows) {
    EXPECT_EQ(row.param, "xi");
    EXPECT_NEAR(*row.v_hom, 1.0, 1e-6);
    EXPECT_NEAR(*row.eta_herald, 1.0, 1e-8);
  }
  const SweepResult d = sweep(c, SweepAxis::delay, {0.0, 1e-12});
  EXPECT_TRUE(d.rows[0].p4.has_value());
  EXPECT_FALSE(d.rows[0].v_hom.has_value());
  EXPECT_EQ(with_axis_value(c, SweepAxis::loss, 0.25).loss, (std::array<double, 4>{0.25, 0.25, 0.25, 0.25}));
}

TEST(Csv, HeaderBlanksAndRoundTrip) {
  SweepResult r;
  r.detector = "pnr";
  r.config_hash = "abc";
  r.notes = {"experiment=probe"};
  SweepRow row;
  row.param = "tau";
  row.value = 1.25e-12;
  row.p4 = 0.1 / 3.0;
  r.rows.push_back(row);
  std::ostringstream out;
  write_csv(r, out);
  const std::string text = out.str();
  EXPECT_NE(text.find("param,value,p4,p_bunch,p_herald,eta_herald,v_hom,v_mzi\n"), std::string::npos);
  EXPECT_NE(text.find(",,,,,\n"), std::string::npos);
  std::istringstream in(text);
  const SweepResult back = read_csv(in);
  EXPECT_EQ(back.detector, "pnr");
  EXPECT_EQ(back.config_hash, "abc");
  EXPECT_EQ(back.notes, r.notes);
  ASSERT_EQ(back.rows.size(), 1u);
  EXPECT_EQ(back.rows[0].value, row.value);
  EXPECT_EQ(*back.rows[0].p4, *row.p4);
  EXPECT_FALSE(back.rows[0].v_hom.has_value());
  std::ostringstream again;
  write_csv(back, again);
  EXPECT_EQ(again.str(), text);
}

TEST(MziMonotone, FourFoldFallsTowardBalancedSplitter) {
  const HhomConfig c = config(JsaModel::waveguide, 0.6);
  EXPECT_TRUE(mzi_monotone(c));
  EXPECT_THROW(mzi_monotone(c, 1), InvalidArgument);
}

}  // namespace
}  // namespace mmg

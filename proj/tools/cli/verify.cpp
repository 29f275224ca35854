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

#include "verify.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>

#include "mmg/elements.hpp"
#include "mmg/equivalence.hpp"
#include "mmg/hhom.hpp"

namespace mmg::cli {
namespace {

constexpr int kOracleCircuits = 20;
constexpr std::uint64_t kOracleSeed = 0x6d6d67617573ull;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

JsaSpec waveguide_source(double xi) {
  JsaSpec s;
  s.model = JsaModel::waveguide;
  s.xi = xi;
  s.bandwidth = 1e11;
  s.walk_off = 29e-12;
  s.signal_center = s.idler_center = 2.0 * kPi * 193.1e12;
  return s;
}

HhomConfig small_config(Detector d) {
  HhomConfig c;
  c.source_a = c.source_b = waveguide_source(0.6);
  c.grid = FrequencyGrid::spanning(c.source_a.signal_center, 1e11, 9);
  c.loss = {0.1, 0.2, 0.15, 0.05};
  c.delay = 1.5e-12;
  c.detector = d;
  return c;
}

CheckResult oracle_suite() {
  CheckResult r{"oracle equivalence (" + std::to_string(kOracleCircuits) + " random circuits)",
                false, {}};
  std::mt19937_64 rng(kOracleSeed);
  double worst = 0.0;
  std::string where;
  int patterns = 0;
  for (int k = 0; k < kOracleCircuits; ++k) {
    const oracle::Circuit c = oracle::random_circuit(rng);
    const oracle::Agreement a = oracle::compare_with_gaussian(c, 4, 5e-7);
    patterns += a.patterns;
    if (a.max_deviation >= worst) {
      worst = a.max_deviation;
      where = c.description + " " + a.worst_pattern;
    }
  }
  r.passed = worst < 1e-6;
  r.detail = std::to_string(patterns) + " probabilities, max deviation " + sci(worst) + " at " + where;
  return r;
}

CheckResult symplectic_suite() {
  CheckResult r{"symplectic residual of elements", false, {}};
  const ModeLayout layout(4, 9);
  const HhomConfig cfg = small_config(Detector::pnr);
  const JsaMatrix jsa = build_jsa(cfg.source_a, cfg.grid);
  double worst = 0.0;
  for (const Transform& t :
       {squeezer(jsa, 0, 1, layout), beam_splitter(0.7, {1, 2}, layout),
        phase_shifter(1.3, 2, layout), delay(3e-12, 1, cfg.grid, layout)}) {
    worst = std::max(worst, symplectic_residual(t.matrix()));
  }
  r.passed = worst < 1e-12;
  r.detail = "max residual " + sci(worst);
  return r;
}

CheckResult purity_suite() {
  CheckResult r{"det sigma = 1 on lossless paths", false, {}};
  HhomConfig c = small_config(Detector::pnr);
  c.loss = {0.0, 0.0, 0.0, 0.0};
  const CovarianceState s = build_hhom(c);
  const Complex log_det = Eigen::PartialPivLU<CMatrix>(s.sigma()).matrixLU().diagonal().array().log().sum();
  const double dev = std::abs(std::exp(log_det.real()) - 1.0);
  r.passed = dev < 1e-8;
  r.detail = "|det - 1| = " + sci(dev);
  return r;
}

CheckResult sps_suite() {
  CheckResult r{"P_SPS independent of beam-splitter angle", false, {}};
  double worst = 0.0;
  for (Detector d : {Detector::pnr, Detector::threshold}) {
    worst = std::max(worst, heralding_efficiency(small_config(d)).theta_drift);
  }
  r.passed = worst < 1e-8;
  r.detail = "max drift " + sci(worst);
  return r;
}

CheckResult sum_suite() {
  CheckResult r{"exhaustive pattern sums", false, {}};
  HhomConfig c = small_config(Detector::pnr);
  c.source_a.xi = c.source_b.xi = 0.2;
  const CovarianceState s = build_hhom(c);
  DetectionLimits limits;
  limits.pnr_cutoff = 32;
  const GaussianDetector det(s, {0, 1, 2, 3}, limits);
  double thr = 0.0;
  for (std::uint32_t on = 0; on < 16; ++on) thr += det.p_threshold(on, 15u & ~on);
  const PnrTable t = det.pnr_table({7, 7, 7, 7});
  double pnr = 0.0;
  for (double p : t.probabilities) pnr += p;
  const double dev = std::max(std::abs(thr - 1.0), std::abs(pnr - 1.0));
  r.passed = dev < 1e-8;
  r.detail = "threshold sum - 1 = " + sci(thr - 1.0) + ", PNR sum - 1 = " + sci(pnr - 1.0);
  return r;
}

CheckResult csv_suite(int threads) {
  CheckResult r{"byte-identical CSV", false, {}};
  const HhomConfig c = small_config(Detector::threshold);
  const std::vector<double> taus{-2e-12, 0.0, 2e-12};
  std::ostringstream a, b;
  write_csv(sweep(c, SweepAxis::delay, taus, 1), a);
  write_csv(sweep(c, SweepAxis::delay, taus, std::max(2, threads)), b);
  std::istringstream in(a.str());
  std::ostringstream again;
  write_csv(read_csv(in), again);
  r.passed = a.str() == b.str() && a.str() == again.str();
  r.detail = r.passed ? "repeat, thread count and round trip agree" : "outputs differ";
  return r;
}

}  // namespace

std::vector<CheckResult> run_verification(std::ostream& out, int threads) {
  std::vector<CheckResult> results;
  using Suite = CheckResult (*)(int);
  const std::pair<const char*, Suite> suites[] = {
      {"oracle", [](int) { return oracle_suite(); }},
      {"symplectic", [](int) { return symplectic_suite(); }},
      {"purity", [](int) { return purity_suite(); }},
      {"sps", [](int) { return sps_suite(); }},
      {"sums", [](int) { return sum_suite(); }},
      {"csv", [](int t) { return csv_suite(t); }},
  };
  for (const auto& [name, run] : suites) {
    CheckResult r;
    try {
      r = run(threads);
    } catch (const std::exception& e) {
      r.name = name;
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
    out.flush();
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace mmg::cli

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

#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <vector>

#include "mmg/detection.hpp"
#include "mmg/elements.hpp"
#include "mmg/hhom.hpp"
#include "mmg/series.hpp"

namespace {

using namespace mmg;

constexpr double kCenter = 2.0 * kPi * 193.1e12;

HhomConfig waveguide_config(int bins) {
  HhomConfig c;
  c.source_a.model = JsaModel::waveguide;
  c.source_a.xi = 0.8;
  c.source_a.bandwidth = 1e11;
  c.source_a.walk_off = 29e-12;
  c.source_a.signal_center = c.source_a.idler_center = kCenter;
  c.source_b = c.source_a;
  c.grid = FrequencyGrid::spanning(kCenter, 4e11, bins);
  return c;
}

void BM_SeriesLog(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  auto shape = std::make_shared<const SeriesShape>(std::vector<int>{order, order, order, order});
  TruncatedSeries a(shape, 1.0);
  for (int v = 0; v < 4; ++v) a = a + TruncatedSeries::variable(shape, v) * Complex(0.1 * (v + 1), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(a.log().exp());
  state.SetComplexityN(static_cast<benchmark::IterationCount>(shape->size()));
}
BENCHMARK(BM_SeriesLog)->Arg(1)->Arg(2)->Arg(3);

void BM_BuildHhom(benchmark::State& state) {
  const HhomConfig c = waveguide_config(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_hhom(c));
}
BENCHMARK(BM_BuildHhom)->Arg(33)->Arg(41)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_DetectorSetup(benchmark::State& state) {
  const CovarianceState st = build_hhom(waveguide_config(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(GaussianDetector(st, {0, 1, 2, 3}));
}
BENCHMARK(BM_DetectorSetup)->Arg(33)->Arg(41)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_PnrTable(benchmark::State& state) {
  const CovarianceState st = build_hhom(waveguide_config(33));
  const GaussianDetector det(st, {0, 1, 2, 3});
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(det.pnr_table({n, n, n, n}));
}
BENCHMARK(BM_PnrTable)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ThresholdPattern(benchmark::State& state) {
  const CovarianceState st = build_hhom(waveguide_config(33));
  const GaussianDetector det(st, {0, 1, 2, 3});
  for (auto _ : state) benchmark::DoNotOptimize(det.p_threshold(0b1111u, 0u));
}
BENCHMARK(BM_ThresholdPattern)->Unit(benchmark::kMicrosecond);

void BM_FourFold(benchmark::State& state) {
  const CovarianceState st = build_hhom(waveguide_config(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(four_fold(st, Detector::pnr));
}
BENCHMARK(BM_FourFold)->Arg(33)->Arg(41)->Arg(65)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

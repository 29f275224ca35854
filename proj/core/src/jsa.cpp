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

#include "mmg/jsa.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <spdlog/spdlog.h>

#include "mmg/error.hpp"

namespace mmg {
namespace {

double gaussian(double x, double width) { return std::exp(-0.5 * (x / width) * (x / width)); }

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

double amplitude(const JsaSpec& spec, double d1, double d2) {
  const double z = spec.bandwidth;
  switch (spec.model) {
    case JsaModel::gaussian:
      return gaussian(d1, z) * gaussian(d2, z);
    case JsaModel::waveguide:
      return gaussian(d1 + d2, z) * sinc(0.5 * spec.walk_off * (d1 - d2));
    case JsaModel::double_lobe: {
      const double h = 0.5 * spec.lobe_separation;
      return gaussian(d1, z) * (gaussian(d2 - h, z) + spec.relative_sign * gaussian(d2 + h, z));
    }
  }
  return 0.0;
}

// Half extent of the signal (axis 0) or idler (axis 1) marginal that should be
// on the grid.
double support_half_width(const JsaSpec& spec, int axis) {
  double w = 4.0 * spec.bandwidth;
  if (spec.model == JsaModel::double_lobe && axis == 1) w += 0.5 * spec.lobe_separation;
  return w;
}

void validate(const JsaSpec& spec) {
  if (!(spec.bandwidth > 0.0) || !std::isfinite(spec.bandwidth)) {
    throw InvalidArgument("JsaSpec: bandwidth must be positive");
  }
  if (!(spec.xi >= 0.0) || !std::isfinite(spec.xi)) {
    throw InvalidArgument("JsaSpec: xi must be finite and non-negative");
  }
  if (spec.model == JsaModel::waveguide && !(spec.walk_off >= 0.0)) {
    throw InvalidArgument("JsaSpec: walk_off must be non-negative");
  }
  if (spec.model == JsaModel::double_lobe) {
    if (spec.relative_sign != 1 && spec.relative_sign != -1) {
      throw InvalidArgument("JsaSpec: relative_sign must be +1 or -1");
    }
    if (!(spec.lobe_separation >= 0.0)) {
      throw InvalidArgument("JsaSpec: lobe_separation must be non-negative");
    }
  }
}

void check_grid(const JsaSpec& spec, const FrequencyGrid& grid, double center, int axis) {
  if (grid.step() > spec.bandwidth / 4.0 * (1.0 + 1e-12)) {
    throw InvalidArgument("build_jsa: grid step exceeds bandwidth/4");
  }
  const double w = support_half_width(spec, axis);
  if (grid.lowest() > center - w || grid.highest() < center + w) {
    spdlog::warn("build_jsa: {} grid does not cover the source support (+/-{:.3g} rad/s)",
                 axis == 0 ? "signal" : "idler", w);
  }
}

}  // namespace

JsaMatrix build_jsa(const JsaSpec& spec, const FrequencyGrid& grid) {
  return build_jsa(spec, grid, grid);
}

JsaMatrix build_jsa(const JsaSpec& spec, const FrequencyGrid& signal_grid,
                    const FrequencyGrid& idler_grid) {
  validate(spec);
  check_grid(spec, signal_grid, spec.signal_center, 0);
  check_grid(spec, idler_grid, spec.idler_center, 1);
  const int ns = signal_grid.n_bins();
  const int ni = idler_grid.n_bins();
  CMatrix f(ns, ni);
  for (int j = 0; j < ni; ++j) {
    const double d2 = idler_grid.bin_frequency(j) - spec.idler_center;
    for (int i = 0; i < ns; ++i) {
      const double d1 = signal_grid.bin_frequency(i) - spec.signal_center;
      f(i, j) = signal_grid.step() * amplitude(spec, d1, d2);
    }
  }
  const double norm = f.norm();
  if (spec.xi == 0.0) {
    f.setZero();
  } else if (norm > 0.0) {
    f *= spec.xi / norm;
  } else {
    throw InvalidArgument("build_jsa: amplitude vanishes on the grid");
  }
  return JsaMatrix{std::move(f), signal_grid, idler_grid};
}

SchmidtData schmidt_decompose(const JsaMatrix& jsa) {
  Eigen::BDCSVD<CMatrix> svd(jsa.f, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return SchmidtData{svd.singularValues(), svd.matrixU(), svd.matrixV()};
}

double schmidt_purity(const RVector& values) {
  const double s2 = values.squaredNorm();
  if (s2 == 0.0) return 1.0;
  return values.array().pow(4).sum() / (s2 * s2);
}

FrequencyGrid default_grid(const JsaSpec& spec, double center) {
  validate(spec);
  double half = std::max(support_half_width(spec, 0), support_half_width(spec, 1));
  if (spec.model == JsaModel::waveguide && spec.walk_off > 0.0) {
    half = std::max(half, 4.0 * 2.0 * kPi / spec.walk_off);
  }
  int n = 41;
  const double max_step = spec.bandwidth / 4.0;
  if (2.0 * half / (n - 1) > max_step) {
    n = static_cast<int>(std::ceil(2.0 * half / max_step)) + 1;
    if (n % 2 == 0) ++n;
  }
  return FrequencyGrid::spanning(center, half, n);
}

void write_jsa_csv(const JsaMatrix& jsa, std::ostream& real_part, std::ostream& imag_part) {
  char buf[32];
  for (int i = 0; i < jsa.f.rows(); ++i) {
    for (int j = 0; j < jsa.f.cols(); ++j) {
      const char* sep = j + 1 < jsa.f.cols() ? "," : "\n";
      std::snprintf(buf, sizeof buf, "%.17g", jsa.f(i, j).real());
      real_part << buf << sep;
      std::snprintf(buf, sizeof buf, "%.17g", jsa.f(i, j).imag());
      imag_part << buf << sep;
    }
  }
}

}  // namespace mmg

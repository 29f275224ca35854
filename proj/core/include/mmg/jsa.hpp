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

#pragma once

#include <iosfwd>

#include "mmg/linalg.hpp"
#include "mmg/modes.hpp"

namespace mmg {

enum class JsaModel { gaussian, waveguide, double_lobe };

/**
 * @brief Parametric joint spectral amplitude. Frequencies in rad/s, times in s.
 *
 * gaussian:    exp(-dv1^2 / 2z^2) exp(-dv2^2 / 2z^2)
 * waveguide:   exp(-(dv1 + dv2)^2 / 2z^2) sinc(L/2 (dv1 - dv2))
 * double_lobe: g(dv1) [g(dv2 - s/2) + sign g(dv2 + s/2)], g Gaussian of width z
 */
struct JsaSpec {
  JsaModel model = JsaModel::gaussian;
  double xi = 0.0;
  double bandwidth = 0.0;
  double walk_off = 0.0;
  double lobe_separation = 0.0;
  int relative_sign = 1;
  double signal_center = 0.0;
  double idler_center = 0.0;
};

struct JsaMatrix {
  CMatrix f;
  FrequencyGrid signal_grid;
  FrequencyGrid idler_grid;

  double xi() const { return f.norm(); }
};

struct SchmidtData {
  RVector values;  // descending
  CMatrix u;
  CMatrix v;
};

/// Samples F(v1, v2) times the grid step and rescales to Frobenius norm xi.
JsaMatrix build_jsa(const JsaSpec& spec, const FrequencyGrid& grid);
JsaMatrix build_jsa(const JsaSpec& spec, const FrequencyGrid& signal_grid,
                    const FrequencyGrid& idler_grid);

/// F = U diag(values) V^dagger.
SchmidtData schmidt_decompose(const JsaMatrix& jsa);

/// Schmidt purity sum(l^4) / (sum l^2)^2 of the normalized spectrum.
double schmidt_purity(const RVector& values);

/**
 * Default grid for a source: 41 bins spanning four spectral widths either
 * side of center (the walk-off scale 2pi/L is used when wider), refined to
 * the smallest odd bin count with step <= bandwidth/4.
 */
FrequencyGrid default_grid(const JsaSpec& spec, double center);

/// Row = signal bin, column = idler bin.
void write_jsa_csv(const JsaMatrix& jsa, std::ostream& real_part, std::ostream& imag_part);

}  // namespace mmg

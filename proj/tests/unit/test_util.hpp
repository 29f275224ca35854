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

#include <cmath>
#include <vector>

#include "mmg/elements.hpp"
#include "mmg/jsa.hpp"
#include "mmg/state.hpp"

namespace mmg::test {

inline constexpr double kCenter = 2.0 * kPi * 193.1e12;

/// One-bin JSA of magnitude xi; its squeezer is a single two-mode squeezer.
inline JsaMatrix single_bin_jsa(double xi) {
  JsaSpec s;
  s.xi = xi;
  s.bandwidth = 1e11;
  s.signal_center = s.idler_center = kCenter;
  return build_jsa(s, FrequencyGrid(kCenter, 1e10, 1));
}

/// Two-mode squeezed vacuum with squeezing r on spatial modes (0, 1).
inline CovarianceState tms_state(double r) {
  const ModeLayout layout(2, 1);
  return apply(vacuum_state(layout), squeezer(single_bin_jsa(r), 0, 1, layout));
}

/// Diagonal JSA with the given Schmidt values on a grid of matching size.
inline JsaMatrix diagonal_jsa(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  JsaMatrix j{CMatrix::Zero(n, n), FrequencyGrid(kCenter, 1e10, n), FrequencyGrid(kCenter, 1e10, n)};
  for (int i = 0; i < n; ++i) j.f(i, i) = values[i];
  return j;
}

inline double sech2(double r) { return 1.0 / (std::cosh(r) * std::cosh(r)); }

}  // namespace mmg::test

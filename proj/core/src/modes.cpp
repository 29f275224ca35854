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

#include "mmg/modes.hpp"

#include <cmath>
#include <string>

#include "mmg/error.hpp"

namespace mmg {

ModeLayout::ModeLayout(int n_spatial, int n_spectral)
    : n_spatial_(n_spatial), n_spectral_(n_spectral) {
  if (n_spatial < 1 || n_spectral < 1) {
    throw InvalidArgument("ModeLayout: counts must be positive, got " +
                          std::to_string(n_spatial) + " x " + std::to_string(n_spectral));
  }
}

int ModeLayout::annihilation_index(int spatial, int spectral) const {
  if (spatial < 0 || spatial >= n_spatial_ || spectral < 0 || spectral >= n_spectral_) {
    throw DimensionError("mode (" + std::to_string(spatial) + ", " + std::to_string(spectral) +
                         ") outside layout");
  }
  return spatial * n_spectral_ + spectral;
}

int ModeLayout::creation_index(int spatial, int spectral) const {
  return annihilation_index(spatial, spectral) + n_modes();
}

CMatrix ModeLayout::metric() const {
  CMatrix k = CMatrix::Zero(dim(), dim());
  for (int i = 0; i < n_modes(); ++i) {
    k(i, i) = 1.0;
    k(i + n_modes(), i + n_modes()) = -1.0;
  }
  return k;
}

FrequencyGrid::FrequencyGrid(double center, double step, int n_bins)
    : center_(center), step_(step), n_bins_(n_bins) {
  if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(center) || n_bins < 1) {
    throw InvalidArgument("FrequencyGrid: need finite step > 0 and n_bins >= 1");
  }
}

FrequencyGrid FrequencyGrid::spanning(double center, double half_span, int n_bins) {
  if (n_bins < 2 || !(half_span > 0.0)) {
    throw InvalidArgument("FrequencyGrid::spanning: need n_bins >= 2 and half_span > 0");
  }
  return FrequencyGrid(center, 2.0 * half_span / (n_bins - 1), n_bins);
}

}  // namespace mmg

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

#include "mmg/linalg.hpp"

namespace mmg {

/**
 * @brief Spatial x spectral mode lattice.
 *
 * Indices are 0-based. The annihilation operator of spatial mode i and
 * spectral bin w sits at i*n_spectral + w; the matching creation operator is
 * offset by n_modes().
 */
class ModeLayout {
 public:
  ModeLayout(int n_spatial, int n_spectral);

  int n_spatial() const { return n_spatial_; }
  int n_spectral() const { return n_spectral_; }
  int n_modes() const { return n_spatial_ * n_spectral_; }
  int dim() const { return 2 * n_modes(); }

  int annihilation_index(int spatial, int spectral) const;
  int creation_index(int spatial, int spectral) const;

  /// diag(+1 x N, -1 x N).
  CMatrix metric() const;

  bool operator==(const ModeLayout&) const = default;

 private:
  int n_spatial_;
  int n_spectral_;
};

/// Uniform angular-frequency grid (rad/s), symmetric about its center.
class FrequencyGrid {
 public:
  FrequencyGrid(double center, double step, int n_bins);

  /// Grid with n_bins covering [center - half_span, center + half_span].
  static FrequencyGrid spanning(double center, double half_span, int n_bins);

  double center() const { return center_; }
  double step() const { return step_; }
  int n_bins() const { return n_bins_; }

  double bin_frequency(int bin) const { return center_ + offset(bin); }
  double offset(int bin) const { return (bin - 0.5 * (n_bins_ - 1)) * step_; }
  double lowest() const { return bin_frequency(0); }
  double highest() const { return bin_frequency(n_bins_ - 1); }

  bool operator==(const FrequencyGrid&) const = default;

 private:
  double center_;
  double step_;
  int n_bins_;
};

}  // namespace mmg

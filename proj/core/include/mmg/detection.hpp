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

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mmg/series.hpp"
#include "mmg/state.hpp"

namespace mmg {

enum class Click : std::uint8_t { off, on };

/// Per-spatial-mode outcome request; either all counts or all clicks.
class DetectionPattern {
 public:
  static DetectionPattern pnr(std::vector<int> modes, std::vector<int> counts);
  static DetectionPattern threshold(std::vector<int> modes, std::vector<Click> clicks);

  bool is_pnr() const { return pnr_; }
  const std::vector<int>& modes() const { return modes_; }
  const std::vector<int>& counts() const { return counts_; }
  const std::vector<Click>& clicks() const { return clicks_; }
  int total_count() const;

 private:
  DetectionPattern() = default;

  bool pnr_ = true;
  std::vector<int> modes_;
  std::vector<int> counts_;
  std::vector<Click> clicks_;
};

struct DetectionLimits {
  int max_threshold_modes = 16;
  int pnr_cutoff = 12;
  double clamp_tolerance = 1e-10;
  /// Eigen-compress sigma-tilde before building determinants.
  bool compress = true;
};

/// PNR probabilities on the box 0 <= n_i <= max_counts_i.
struct PnrTable {
  std::shared_ptr<const SeriesShape> shape;
  std::vector<double> probabilities;

  double at(std::span<const int> counts) const;
};

/**
 * @brief Detection statistics of a fixed set of spatial modes of one state.
 *
 * Construction reduces the state and, unless disabled, diagonalizes the
 * reduced sigma - 1 = Q L Q^dagger so that every vacuum projection becomes an
 * r x r determinant with r the numerical rank. Subsets are addressed by
 * bitmasks over positions in modes().
 */
class GaussianDetector {
 public:
  GaussianDetector(const CovarianceState& state, std::vector<int> modes,
                   DetectionLimits limits = {});

  const std::vector<int>& modes() const { return modes_; }
  int rank() const { return static_cast<int>(lambda_.size()); }

  /// Vacuum probability of the masked modes.
  double p_off(std::uint32_t mask) const;
  /// det(1 + D(t) sigma-tilde / 2)^{-1/2}, one weight per mode position.
  double weighted_off(std::span<const double> weights) const;
  double p_threshold(std::uint32_t on_mask, std::uint32_t off_mask) const;

  PnrTable pnr_table(std::vector<int> max_counts) const;
  double p_pnr(std::span<const int> counts) const;
  /// Exactly k_i clicks among m threshold detectors fed by an even fan-out.
  double fanout_pnr(std::span<const int> counts, int m) const;

  /// Taylor series of det(1 + D(1 + s) sigma-tilde / 2)^{-1/2} in s.
  TruncatedSeries inv_sqrt_det_series(std::vector<int> orders) const;

 private:
  CMatrix weighted_matrix(std::span<const double> weights) const;

  std::vector<int> modes_;
  DetectionLimits limits_;
  int n_spectral_;
  RVector lambda_;
  std::vector<CMatrix> gram_;  // compressed: Q_i^dagger Q_i per mode
  CMatrix sigma_tilde_;        // uncompressed path
};

double p_vacuum(const CovarianceState& state, std::span<const int> modes);
double p_threshold(const CovarianceState& state, std::span<const int> on,
                   std::span<const int> off, const DetectionLimits& limits = {});
double p_pnr(const CovarianceState& state, std::span<const int> modes,
             std::span<const int> counts, const DetectionLimits& limits = {});
double probability(const CovarianceState& state, const DetectionPattern& pattern,
                   const DetectionLimits& limits = {});
std::vector<double> pnr_distribution(const CovarianceState& state, int mode, int n_max,
                                     const DetectionLimits& limits = {});
double fanout_pnr(const CovarianceState& state, std::span<const int> modes,
                  std::span<const int> counts, int m, const DetectionLimits& limits = {});

/**
 * Series of det(1 + D(t) sigma_tilde / 2)^{-1/2} in s = t - 1, where row r of
 * sigma_tilde is weighted by t_{row_variable[r]}. The coefficient of s^n is
 * (-1)^|n| P(n). Direct LU over the series ring, without compression.
 */
TruncatedSeries series_inv_sqrt_det(const CMatrix& sigma_tilde,
                                    std::span<const int> row_variable, std::vector<int> orders);

}  // namespace mmg

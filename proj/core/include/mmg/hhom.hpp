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

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mmg/detection.hpp"
#include "mmg/jsa.hpp"

namespace mmg {

enum class Detector { threshold, pnr };

const char* to_string(Detector detector);

/// Spatial roles in the heralded HOM circuit (0-based).
namespace hhom {
inline constexpr int herald_a = 0;
inline constexpr int idler_a = 1;
inline constexpr int idler_b = 2;
inline constexpr int herald_b = 3;
}  // namespace hhom

struct BandpassSpec {
  double center = 0.0;
  double half_width = 0.0;
  std::vector<int> modes{0, 1, 2, 3};
};

/**
 * @brief Two sources (0,1) and (3,2), a delay on idler 1, optional filter
 * then loss, and a beam splitter between the idlers.
 */
struct HhomConfig {
  JsaSpec source_a;
  JsaSpec source_b;
  FrequencyGrid grid{0.0, 1.0, 1};
  double delay = 0.0;
  double bs_angle = kPi / 4;
  std::array<double, 4> loss{0.0, 0.0, 0.0, 0.0};
  std::optional<BandpassSpec> filter;
  Detector detector = Detector::pnr;
  DetectionLimits limits;
};

CovarianceState build_hhom(const HhomConfig& config);

struct Coincidences {
  double four_fold = 0.0;
  double bunching = 0.0;
};

/// Four-fold and bunching probabilities from one detector evaluation.
Coincidences coincidences(const CovarianceState& state, Detector detector,
                          const DetectionLimits& limits = {});
double four_fold(const CovarianceState& state, Detector detector,
                 const DetectionLimits& limits = {});
double bunching(const CovarianceState& state, Detector detector,
                const DetectionLimits& limits = {});
double heralding_rate(const CovarianceState& state, Detector detector,
                      const DetectionLimits& limits = {});

struct HeraldingEfficiency {
  double efficiency = 0.0;
  double p_sps = 0.0;
  double p_herald = 0.0;
  /// |P_sps(theta = 0) - P_sps(theta = pi/4)|.
  double theta_drift = 0.0;
};

/// P_sps at theta = 0 over the heralding rate; throws if the rate is zero or
/// P_sps moves by more than 1e-8 between theta = 0 and pi/4.
HeraldingEfficiency heralding_efficiency(const HhomConfig& config);

double visibility_hom(double p4_zero_delay, double p4_plateau);
double visibility_mzi(double p4_max, double p4_min);

/// True if P4 is non-increasing in theta on [0, pi/4] at `samples` equally
/// spaced angles, up to a relative tolerance of 1e-9.
bool mzi_monotone(const HhomConfig& config, int samples = 5);

/**
 * Delay used for the tau = infinity plateau: half the period 2pi/step of the
 * discretized spectral phase.
 */
double plateau_delay(const FrequencyGrid& grid);

struct Plateau {
  double p4 = 0.0;
  /// |P4(plateau) - P4(plateau / 2)|, a convergence indicator.
  double drift = 0.0;
};

Plateau four_fold_plateau(const HhomConfig& config);

struct RatioR {
  double p4_theta0 = 0.0;
  double p4_plateau = 0.0;
  double max_over_plateau = 0.0;
  double plateau_over_max = 0.0;
};

RatioR ratio_R(const HhomConfig& config);

/// (sum tanh^2)^-2 sum tanh^4 of the Schmidt values.
double analytic_heralded_purity(const RVector& schmidt_values);

inline double squeezing_db(double xi) { return 20.0 * xi / 2.302585092994045684; }

enum class SweepAxis { delay, angle, squeezing, loss, filter_width };

const char* axis_name(SweepAxis axis);

struct SweepRow {
  std::string param;
  double value = 0.0;
  std::optional<double> p4;
  std::optional<double> p_bunch;
  std::optional<double> p_herald;
  std::optional<double> eta_herald;
  std::optional<double> v_hom;
  std::optional<double> v_mzi;
};

struct SweepResult {
  std::string detector;
  std::string config_hash;
  std::vector<std::string> notes;
  std::vector<SweepRow> rows;
};

/// Applies one axis value to a copy of the config.
HhomConfig with_axis_value(const HhomConfig& base, SweepAxis axis, double value);

/**
 * One row per value, in input order. delay and angle rows carry p4, p_bunch
 * and p_herald; squeezing, loss and filter_width rows also carry eta_herald,
 * v_hom and v_mzi. Rows are computed on up to n_threads threads.
 */
SweepResult sweep(const HhomConfig& base, SweepAxis axis, const std::vector<double>& values,
                  int n_threads = 1);

/// All metrics at one configuration.
SweepRow evaluate_point(const HhomConfig& config, const std::string& param, double value);

std::string config_hash(const HhomConfig& config);

void write_csv(const SweepResult& result, std::ostream& out);
SweepResult read_csv(std::istream& in);

}  // namespace mmg

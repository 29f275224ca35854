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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmg/hhom.hpp"

namespace mmg::cli {

/// Configuration problem; field() names the offending key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Experiment {
  hom_delay_sweep,
  mzi_angle_sweep,
  power_sweep,
  loss_sweep,
  filter_study,
  structured_sources,
  probe
};

const char* to_string(Experiment e);

struct RunConfig {
  Experiment experiment = Experiment::probe;
  HhomConfig base;
  /// Swept values in internal units (s, rad, dimensionless); empty for probe.
  std::vector<double> values;
  /// filter_study only: half-widths in rad/s, +inf meaning no filter.
  std::vector<double> filter_widths;
  std::string output = "run";
  bool svg = true;
};

/// Axis swept by an experiment; probe and filter_study report squeezing.
SweepAxis experiment_axis(Experiment e);

/// Parses "<number> <unit>" for the given dimension ("frequency", "time" or
/// "angle") and returns the value in rad/s, s or rad.
double parse_quantity(const std::string& text, const std::string& dimension,
                      const std::string& field);

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

}  // namespace mmg::cli

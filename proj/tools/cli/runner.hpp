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
#include <string>

#include "config.hpp"
#include "mmg/hhom.hpp"

namespace mmg::cli {

struct RunOptions {
  int threads = 1;
  std::filesystem::path output_dir = ".";
};

struct RunOutcome {
  SweepResult result;
  std::filesystem::path csv;
  std::filesystem::path svg;  // empty when no plot was written
  std::string summary;
};

/// Computes the experiment, then writes <prefix>.csv (and .svg) under the
/// output directory.
RunOutcome run_experiment(const RunConfig& config, const RunOptions& options);

/// The computation alone, without touching the filesystem.
SweepResult compute_experiment(const RunConfig& config, int threads);

}  // namespace mmg::cli

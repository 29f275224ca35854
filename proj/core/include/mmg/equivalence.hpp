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
#include <random>
#include <string>
#include <vector>

#include "mmg/detection.hpp"
#include "mmg/jsa.hpp"
#include "mmg/oracle.hpp"
#include "mmg/state.hpp"

namespace mmg::oracle {

/// Pair sources followed by passive elements, buildable on both the Gaussian
/// and the Fock side.
struct Circuit {
  struct Source {
    JsaMatrix jsa;
    int signal = 0;
    int idler = 1;
  };

  ModeLayout layout{1, 1};
  std::vector<Source> sources;
  std::vector<Transform> elements;
  std::string description;
};

CovarianceState gaussian_output(const Circuit& circuit);
FockState fock_output(const Circuit& circuit, int cutoff);

struct RandomCircuitOptions {
  int max_spatial = 4;
  int max_spectral = 2;
  double max_xi = 0.4;
};

/// Random sources, beam splitters, phases, delays, losses and filters.
Circuit random_circuit(std::mt19937_64& rng, const RandomCircuitOptions& options = {});

struct Agreement {
  double max_deviation = 0.0;
  std::string worst_pattern;
  int patterns = 0;
  int cutoff = 0;
  double truncation_deficit = 0.0;
};

/// Compares vacuum, threshold (every on/off/unmeasured assignment) and PNR
/// (all-mode patterns with total count <= max_total) probabilities. The Fock
/// cutoff grows until the truncation deficit drops below deficit_target or
/// reaches max_cutoff.
Agreement compare_with_gaussian(const Circuit& circuit, int max_total, double deficit_target,
                                int max_cutoff = 24);

}  // namespace mmg::oracle

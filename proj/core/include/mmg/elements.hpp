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

#include <span>
#include <utility>

#include "mmg/jsa.hpp"
#include "mmg/state.hpp"

namespace mmg {

/// Multimode two-mode squeezer assembled from the Schmidt decomposition.
Transform squeezer(const SchmidtData& schmidt, int signal, int idler, const ModeLayout& layout);
Transform squeezer(const JsaMatrix& jsa, int signal, int idler, const ModeLayout& layout);
/// Same squeezer through the general matrix exponential; used as a cross-check.
Transform squeezer_from_hamiltonian(const JsaMatrix& jsa, int signal, int idler,
                                    const ModeLayout& layout);

/// Frequency-independent rotation [[cos, -sin], [sin, cos]] between two modes.
Transform beam_splitter(double theta, std::pair<int, int> modes, const ModeLayout& layout);
Transform phase_shifter(double phi, int mode, const ModeLayout& layout);
/// Spectral phases exp(i * offset(bin) * tau) on one spatial mode.
Transform delay(double tau, int mode, const FrequencyGrid& grid, const ModeLayout& layout);
/// Amplitude transmission sqrt(1 - epsilon) on each listed mode.
Transform loss(double epsilon, std::span<const int> modes, const ModeLayout& layout);
/// Passes bins with |v - center| <= half_width on each listed mode.
Transform bandpass_filter(double center, double half_width, std::span<const int> modes,
                          const FrequencyGrid& grid, const ModeLayout& layout);

}  // namespace mmg

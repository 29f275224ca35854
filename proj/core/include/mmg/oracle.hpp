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
#include <unordered_map>
#include <vector>

#include "mmg/detection.hpp"
#include "mmg/jsa.hpp"
#include "mmg/state.hpp"

/**
 * Fock-basis reference simulator for small systems. Amplitudes are stored
 * sparsely; lossy maps keep the ancilla occupations as branch labels so that
 * the state is an ensemble of orthogonal pure branches.
 */
namespace mmg::oracle {

/// Occupation tuple packed 8 bits per mode (at most 8 modes).
using Occupation = std::uint64_t;

inline int occupation_of(Occupation occ, int mode) {
  return static_cast<int>((occ >> (8 * mode)) & 0xFFu);
}

inline Occupation with_added(Occupation occ, int mode, int n) {
  return occ + (static_cast<Occupation>(n) << (8 * mode));
}

int total_photons(Occupation occ, int n_modes);

class FockState {
 public:
  using Amplitudes = std::unordered_map<Occupation, Complex>;

  struct Branch {
    std::vector<std::uint8_t> ancilla;
    Amplitudes amplitudes;
  };

  /// Vacuum.
  FockState(ModeLayout layout, int cutoff);

  const ModeLayout& layout() const { return layout_; }
  int cutoff() const { return cutoff_; }
  const std::vector<Branch>& branches() const { return branches_; }
  std::vector<Branch>& branches() { return branches_; }

  double norm_squared() const;
  /// Probability mass lost to the photon cutoff, 1 - norm_squared().
  double truncation_deficit() const { return 1.0 - norm_squared(); }
  Complex amplitude(Occupation occ) const;  // single-branch states only

 private:
  ModeLayout layout_;
  int cutoff_;
  std::vector<Branch> branches_;
};

/**
 * Multimode squeezed vacuum of one source on (signal, idler), built from the
 * Schmidt-mode pair expansion and rotated into the bin basis. Schmidt modes
 * with value <= 1e-8 are dropped.
 */
FockState fock_from_jsa(const JsaMatrix& jsa, int signal, int idler, const ModeLayout& layout,
                        int cutoff);

/// Product of two states with disjoint support, truncated to a's cutoff.
FockState tensor(const FockState& a, const FockState& b);

/// a_j^dagger -> sum_k alpha_kj a_k^dagger; contractive alpha is dilated
/// with ancilla modes.
FockState apply_passive_fock(const FockState& state, const CMatrix& alpha);

/// Passive transforms directly; symplectic ones only if block diagonal.
FockState apply(const FockState& state, const Transform& t);

double fock_detection(const FockState& state, const DetectionPattern& pattern);
double fock_vacuum_probability(const FockState& state, const std::vector<int>& modes);

/// Purity of the heralded mode conditioned on one photon in the herald mode,
/// with all other modes traced out.
double heralded_purity(const FockState& state, int herald_mode, int heralded_mode);

}  // namespace mmg::oracle

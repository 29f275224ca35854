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
#include <vector>

#include "mmg/linalg.hpp"
#include "mmg/modes.hpp"

namespace mmg {

/**
 * @brief Vacuum-normalized covariance matrix of a zero-mean Gaussian state.
 *
 * The vacuum is the identity. Values are immutable; every operation returns a
 * new state.
 */
class CovarianceState {
 public:
  /// Validates size and Hermiticity (1e-10 relative to the norm).
  CovarianceState(ModeLayout layout, CMatrix sigma);

  const ModeLayout& layout() const { return layout_; }
  const CMatrix& sigma() const { return sigma_; }

  /// sigma - identity.
  CMatrix sigma_tilde() const;

 private:
  ModeLayout layout_;
  CMatrix sigma_;
};

CovarianceState vacuum_state(const ModeLayout& layout);

/**
 * @brief Either a symplectic matrix M (2N x 2N) or a passive channel matrix
 * U (N x N) acting as diag(U, U*) on sigma - 1.
 */
class Transform {
 public:
  enum class Kind { symplectic, passive };

  /// Checks M K M^dagger = K to 1e-12.
  static Transform symplectic(CMatrix m, ModeLayout layout);
  /// Checks singular values of U are at most 1 + 1e-12.
  static Transform passive(CMatrix u, ModeLayout layout);
  static Transform identity(const ModeLayout& layout);

  Kind kind() const { return kind_; }
  const CMatrix& matrix() const { return matrix_; }
  const ModeLayout& layout() const { return layout_; }

  /// Doubled-basis action: M itself, or diag(U, U*) for passive kinds.
  CMatrix doubled() const;

 private:
  Transform(Kind kind, CMatrix matrix, ModeLayout layout);

  Kind kind_;
  CMatrix matrix_;
  ModeLayout layout_;
};

double symplectic_residual(const CMatrix& m);

/// Symplectic transform exp(-2i K H) for a Hermitian doubled-basis H.
Transform symplectic_from_hamiltonian(const CMatrix& h, const ModeLayout& layout);

/// "second after first" for two symplectic transforms.
Transform compose(const Transform& first, const Transform& second);

CovarianceState apply_symplectic(const CovarianceState& state, const Transform& t);
CovarianceState apply_passive_channel(const CovarianceState& state, const Transform& t);
/// Dispatches on the transform kind.
CovarianceState apply(const CovarianceState& state, const Transform& t);

/// Covariance of the listed spatial modes, in the given order.
CovarianceState reduce(const CovarianceState& state, std::span<const int> spatial_modes);

/// Places an element defined on k spatial modes onto acting_modes of layout.
Transform embed(const Transform& element, std::span<const int> acting_modes,
                const ModeLayout& layout);

/// Same result as apply(state, embed(element, acting_modes, layout)) without
/// forming the global matrix.
CovarianceState apply_local(const CovarianceState& state, const Transform& element,
                            std::span<const int> acting_modes);

/// Mean photon number of one spatial mode, summed over spectral bins.
double mean_photon_number(const CovarianceState& state, int spatial_mode);

}  // namespace mmg

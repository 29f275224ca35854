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

#include "mmg/state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmg/error.hpp"

namespace mmg {
namespace {

constexpr double kSymplecticTolerance = 1e-12;
constexpr double kHermitianTolerance = 1e-10;

void require_same_layout(const ModeLayout& a, const ModeLayout& b, const char* where) {
  if (!(a == b)) {
    throw DimensionError(std::string(where) + ": layout mismatch");
  }
}

CMatrix symmetrized(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Local doubled-basis index -> global doubled-basis index.
std::vector<int> doubled_map(std::span<const int> modes, int n_spectral, int n_global) {
  const int k = static_cast<int>(modes.size());
  std::vector<int> map(2 * k * n_spectral);
  for (int j = 0; j < k; ++j) {
    for (int w = 0; w < n_spectral; ++w) {
      int g = modes[j] * n_spectral + w;
      map[j * n_spectral + w] = g;
      map[k * n_spectral + j * n_spectral + w] = g + n_global;
    }
  }
  return map;
}

void validate_modes(std::span<const int> modes, const ModeLayout& layout, const char* where) {
  if (modes.empty()) throw InvalidArgument(std::string(where) + ": empty mode set");
  std::vector<int> sorted(modes.begin(), modes.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument(std::string(where) + ": repeated spatial mode");
  }
  if (sorted.front() < 0 || sorted.back() >= layout.n_spatial()) {
    throw DimensionError(std::string(where) + ": spatial mode out of range");
  }
}

}  // namespace

CovarianceState::CovarianceState(ModeLayout layout, CMatrix sigma)
    : layout_(layout), sigma_(std::move(sigma)) {
  if (sigma_.rows() != layout_.dim() || sigma_.cols() != layout_.dim()) {
    throw DimensionError("CovarianceState: sigma must be " + std::to_string(layout_.dim()) +
                         " square");
  }
  double scale = std::max(1.0, max_abs(sigma_));
  if (max_abs(sigma_ - sigma_.adjoint()) > kHermitianTolerance * scale) {
    throw UnphysicalState("CovarianceState: sigma is not Hermitian");
  }
}

CMatrix CovarianceState::sigma_tilde() const {
  return sigma_ - CMatrix::Identity(layout_.dim(), layout_.dim());
}

CovarianceState vacuum_state(const ModeLayout& layout) {
  return CovarianceState(layout, CMatrix::Identity(layout.dim(), layout.dim()));
}

Transform::Transform(Kind kind, CMatrix matrix, ModeLayout layout)
    : kind_(kind), matrix_(std::move(matrix)), layout_(layout) {}

Transform Transform::symplectic(CMatrix m, ModeLayout layout) {
  if (m.rows() != layout.dim() || m.cols() != layout.dim()) {
    throw DimensionError("Transform::symplectic: matrix size does not match layout");
  }
  double r = symplectic_residual(m);
  if (!(r < kSymplecticTolerance)) {
    throw UnphysicalState("Transform::symplectic: residual " + std::to_string(r) +
                          " exceeds 1e-12");
  }
  return Transform(Kind::symplectic, std::move(m), layout);
}

Transform Transform::passive(CMatrix u, ModeLayout layout) {
  if (u.rows() != layout.n_modes() || u.cols() != layout.n_modes()) {
    throw DimensionError("Transform::passive: matrix size does not match layout");
  }
  double top = 0.0;
  CMatrix off = u;
  off.diagonal().setZero();
  if (max_abs(off) == 0.0) {
    top = u.size() == 0 ? 0.0 : u.diagonal().cwiseAbs().maxCoeff();
  } else {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(u.adjoint() * u, Eigen::EigenvaluesOnly);
    top = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  if (top > 1.0 + 1e-12) {
    throw UnphysicalState("Transform::passive: matrix is not contractive");
  }
  return Transform(Kind::passive, std::move(u), layout);
}

Transform Transform::identity(const ModeLayout& layout) {
  return Transform(Kind::symplectic, CMatrix::Identity(layout.dim(), layout.dim()), layout);
}

CMatrix Transform::doubled() const {
  if (kind_ == Kind::symplectic) return matrix_;
  const int n = layout_.n_modes();
  CMatrix d = CMatrix::Zero(2 * n, 2 * n);
  d.topLeftCorner(n, n) = matrix_;
  d.bottomRightCorner(n, n) = matrix_.conjugate();
  return d;
}

double symplectic_residual(const CMatrix& m) {
  const int n = static_cast<int>(m.rows()) / 2;
  RVector k(2 * n);
  k.head(n).setOnes();
  k.tail(n).setConstant(-1.0);
  CMatrix kd = k.cast<Complex>().asDiagonal();
  return max_abs(m * kd * m.adjoint() - kd);
}

Transform symplectic_from_hamiltonian(const CMatrix& h, const ModeLayout& layout) {
  if (h.rows() != layout.dim() || h.cols() != layout.dim()) {
    throw DimensionError("symplectic_from_hamiltonian: size mismatch");
  }
  return Transform::symplectic(expm(Complex(0.0, -2.0) * layout.metric() * h), layout);
}

Transform compose(const Transform& first, const Transform& second) {
  require_same_layout(first.layout(), second.layout(), "compose");
  if (first.kind() != Transform::Kind::symplectic ||
      second.kind() != Transform::Kind::symplectic) {
    throw InvalidArgument("compose: only symplectic transforms compose into a symplectic");
  }
  return Transform::symplectic(second.matrix() * first.matrix(), first.layout());
}

CovarianceState apply_symplectic(const CovarianceState& state, const Transform& t) {
  require_same_layout(state.layout(), t.layout(), "apply_symplectic");
  if (t.kind() != Transform::Kind::symplectic) {
    throw InvalidArgument("apply_symplectic: transform is passive");
  }
  const CMatrix& m = t.matrix();
  return CovarianceState(state.layout(), symmetrized(m * state.sigma() * m.adjoint()));
}

CovarianceState apply_passive_channel(const CovarianceState& state, const Transform& t) {
  require_same_layout(state.layout(), t.layout(), "apply_passive_channel");
  if (t.kind() != Transform::Kind::passive) {
    throw InvalidArgument("apply_passive_channel: transform is symplectic");
  }
  const int d = state.layout().dim();
  CMatrix u = t.doubled();
  CMatrix out = u * state.sigma_tilde() * u.adjoint() + CMatrix::Identity(d, d);
  return CovarianceState(state.layout(), symmetrized(out));
}

CovarianceState apply(const CovarianceState& state, const Transform& t) {
  return t.kind() == Transform::Kind::symplectic ? apply_symplectic(state, t)
                                                 : apply_passive_channel(state, t);
}

CovarianceState reduce(const CovarianceState& state, std::span<const int> spatial_modes) {
  const ModeLayout& layout = state.layout();
  validate_modes(spatial_modes, layout, "reduce");
  std::vector<int> idx = doubled_map(spatial_modes, layout.n_spectral(), layout.n_modes());
  const int d = static_cast<int>(idx.size());
  CMatrix out(d, d);
  for (int c = 0; c < d; ++c) {
    for (int r = 0; r < d; ++r) out(r, c) = state.sigma()(idx[r], idx[c]);
  }
  return CovarianceState(ModeLayout(static_cast<int>(spatial_modes.size()), layout.n_spectral()),
                         std::move(out));
}

Transform embed(const Transform& element, std::span<const int> acting_modes,
                const ModeLayout& layout) {
  const ModeLayout& local = element.layout();
  if (local.n_spectral() != layout.n_spectral()) {
    throw DimensionError("embed: spectral bin counts differ");
  }
  if (static_cast<int>(acting_modes.size()) != local.n_spatial()) {
    throw DimensionError("embed: element acts on " + std::to_string(local.n_spatial()) +
                         " modes but " + std::to_string(acting_modes.size()) + " were given");
  }
  validate_modes(acting_modes, layout, "embed");
  std::vector<int> map = doubled_map(acting_modes, layout.n_spectral(), layout.n_modes());
  if (element.kind() == Transform::Kind::symplectic) {
    CMatrix m = CMatrix::Identity(layout.dim(), layout.dim());
    const int d = local.dim();
    for (int c = 0; c < d; ++c) {
      for (int r = 0; r < d; ++r) m(map[r], map[c]) = element.matrix()(r, c);
    }
    return Transform::symplectic(std::move(m), layout);
  }
  CMatrix u = CMatrix::Identity(layout.n_modes(), layout.n_modes());
  const int n = local.n_modes();
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) u(map[r], map[c]) = element.matrix()(r, c);
  }
  return Transform::passive(std::move(u), layout);
}

CovarianceState apply_local(const CovarianceState& state, const Transform& element,
                            std::span<const int> acting_modes) {
  const ModeLayout& layout = state.layout();
  if (element.layout().n_spectral() != layout.n_spectral() ||
      static_cast<int>(acting_modes.size()) != element.layout().n_spatial()) {
    throw DimensionError("apply_local: element does not fit the acting modes");
  }
  validate_modes(acting_modes, layout, "apply_local");
  std::vector<int> idx = doubled_map(acting_modes, layout.n_spectral(), layout.n_modes());
  const bool passive = element.kind() == Transform::Kind::passive;
  const CMatrix g = element.doubled();
  const int d = layout.dim();
  const int k = static_cast<int>(idx.size());

  CMatrix s = passive ? state.sigma_tilde() : state.sigma();
  CMatrix cols(d, k);
  for (int c = 0; c < k; ++c) cols.col(c) = s.col(idx[c]);
  cols = cols * g.adjoint();
  for (int c = 0; c < k; ++c) s.col(idx[c]) = cols.col(c);
  CMatrix rows(k, d);
  for (int r = 0; r < k; ++r) rows.row(r) = s.row(idx[r]);
  rows = g * rows;
  for (int r = 0; r < k; ++r) s.row(idx[r]) = rows.row(r);
  if (passive) s += CMatrix::Identity(d, d);
  return CovarianceState(layout, symmetrized(s));
}

double mean_photon_number(const CovarianceState& state, int spatial_mode) {
  const ModeLayout& layout = state.layout();
  double n = 0.0;
  for (int w = 0; w < layout.n_spectral(); ++w) {
    int i = layout.annihilation_index(spatial_mode, w);
    n += 0.5 * (state.sigma()(i, i).real() - 1.0);
  }
  return n;
}

}  // namespace mmg

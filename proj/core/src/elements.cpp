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

#include "mmg/elements.hpp"

#include <cmath>
#include <string>

#include "mmg/error.hpp"

namespace mmg {
namespace {

void check_pair(int a, int b, const char* where) {
  if (a == b) throw InvalidArgument(std::string(where) + ": modes must differ");
}

void check_bins(const ModeLayout& layout, int n, const char* where) {
  if (layout.n_spectral() != n) {
    throw DimensionError(std::string(where) + ": spectral size " + std::to_string(n) +
                         " does not match layout (" + std::to_string(layout.n_spectral()) + ")");
  }
}

Transform unitary_element(const CMatrix& alpha, int n_spatial, int n_spectral) {
  const int n = static_cast<int>(alpha.rows());
  CMatrix m = CMatrix::Zero(2 * n, 2 * n);
  m.topLeftCorner(n, n) = alpha;
  m.bottomRightCorner(n, n) = alpha.conjugate();
  return Transform::symplectic(std::move(m), ModeLayout(n_spatial, n_spectral));
}

Transform embed_at(const Transform& local, std::initializer_list<int> modes,
                   const ModeLayout& layout) {
  std::vector<int> m(modes);
  return embed(local, m, layout);
}

}  // namespace

Transform squeezer(const SchmidtData& schmidt, int signal, int idler, const ModeLayout& layout) {
  check_pair(signal, idler, "squeezer");
  const int n = layout.n_spectral();
  check_bins(layout, static_cast<int>(schmidt.u.rows()), "squeezer");
  if (schmidt.v.rows() != n || schmidt.values.size() != n) {
    throw DimensionError("squeezer: Schmidt data must be square with the layout's bin count");
  }
  const CMatrix& u = schmidt.u;
  const CMatrix& v = schmidt.v;
  RVector ch = schmidt.values.array().cosh();
  RVector sh = schmidt.values.array().sinh();
  CMatrix c = ch.cast<Complex>().asDiagonal();
  CMatrix s = sh.cast<Complex>().asDiagonal();

  // Blocks ordered (a_s, a_i, a_s^dag, a_i^dag); M = W M_D W^dag with
  // W = diag(U, V*, U*, V).
  CMatrix m = CMatrix::Zero(4 * n, 4 * n);
  m.block(0, 0, n, n) = u * c * u.adjoint();
  m.block(0, 3 * n, n, n) = -kI * (u * s * v.adjoint());
  m.block(n, n, n, n) = v.conjugate() * c * v.transpose();
  m.block(n, 2 * n, n, n) = -kI * (v.conjugate() * s * u.transpose());
  m.block(2 * n, n, n, n) = kI * (u.conjugate() * s * v.transpose());
  m.block(2 * n, 2 * n, n, n) = u.conjugate() * c * u.transpose();
  m.block(3 * n, 0, n, n) = kI * (v * s * u.adjoint());
  m.block(3 * n, 3 * n, n, n) = v * c * v.adjoint();
  return embed_at(Transform::symplectic(std::move(m), ModeLayout(2, n)), {signal, idler}, layout);
}

Transform squeezer(const JsaMatrix& jsa, int signal, int idler, const ModeLayout& layout) {
  if (jsa.f.rows() != jsa.f.cols()) {
    throw DimensionError("squeezer: JSA must be square");
  }
  return squeezer(schmidt_decompose(jsa), signal, idler, layout);
}

Transform squeezer_from_hamiltonian(const JsaMatrix& jsa, int signal, int idler,
                                    const ModeLayout& layout) {
  check_pair(signal, idler, "squeezer_from_hamiltonian");
  const int n = layout.n_spectral();
  check_bins(layout, static_cast<int>(jsa.f.rows()), "squeezer_from_hamiltonian");
  if (jsa.f.cols() != n) throw DimensionError("squeezer_from_hamiltonian: JSA must be square");
  CMatrix pair = CMatrix::Zero(2 * n, 2 * n);
  pair.topRightCorner(n, n) = jsa.f;
  pair.bottomLeftCorner(n, n) = jsa.f.transpose();
  CMatrix h = CMatrix::Zero(4 * n, 4 * n);
  h.topRightCorner(2 * n, 2 * n) = 0.5 * pair;
  h.bottomLeftCorner(2 * n, 2 * n) = 0.5 * pair.conjugate();
  ModeLayout local(2, n);
  return embed_at(symplectic_from_hamiltonian(h, local), {signal, idler}, layout);
}

Transform beam_splitter(double theta, std::pair<int, int> modes, const ModeLayout& layout) {
  check_pair(modes.first, modes.second, "beam_splitter");
  const int n = layout.n_spectral();
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  CMatrix alpha = CMatrix::Zero(2 * n, 2 * n);
  for (int w = 0; w < n; ++w) {
    alpha(w, w) = c;
    alpha(w, n + w) = -s;
    alpha(n + w, w) = s;
    alpha(n + w, n + w) = c;
  }
  return embed_at(unitary_element(alpha, 2, n), {modes.first, modes.second}, layout);
}

Transform phase_shifter(double phi, int mode, const ModeLayout& layout) {
  const int n = layout.n_spectral();
  CMatrix alpha = CMatrix::Identity(n, n) * std::polar(1.0, phi);
  return embed_at(unitary_element(alpha, 1, n), {mode}, layout);
}

Transform delay(double tau, int mode, const FrequencyGrid& grid, const ModeLayout& layout) {
  if (!std::isfinite(tau)) throw InvalidArgument("delay: tau must be finite");
  const int n = layout.n_spectral();
  check_bins(layout, grid.n_bins(), "delay");
  CMatrix alpha = CMatrix::Zero(n, n);
  for (int w = 0; w < n; ++w) alpha(w, w) = std::polar(1.0, grid.offset(w) * tau);
  return embed_at(unitary_element(alpha, 1, n), {mode}, layout);
}

Transform loss(double epsilon, std::span<const int> modes, const ModeLayout& layout) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw InvalidArgument("loss: epsilon must lie in [0, 1]");
  }
  const int k = static_cast<int>(modes.size());
  const int n = layout.n_spectral();
  CMatrix u = CMatrix::Identity(k * n, k * n) * std::sqrt(1.0 - epsilon);
  return embed(Transform::passive(std::move(u), ModeLayout(k, n)), modes, layout);
}

Transform bandpass_filter(double center, double half_width, std::span<const int> modes,
                          const FrequencyGrid& grid, const ModeLayout& layout) {
  if (!(half_width > 0.0)) throw InvalidArgument("bandpass_filter: half width must be positive");
  const int n = layout.n_spectral();
  check_bins(layout, grid.n_bins(), "bandpass_filter");
  const double slack = 1e-12 * std::max(std::abs(center), half_width);
  RVector pass(n);
  int open = 0;
  for (int w = 0; w < n; ++w) {
    const bool in = std::abs(grid.bin_frequency(w) - center) <= half_width + slack;
    pass(w) = in ? 1.0 : 0.0;
    open += in;
  }
  if (open == 0) throw InvalidArgument("bandpass_filter: passband lies outside the grid");
  const int k = static_cast<int>(modes.size());
  CMatrix u = CMatrix::Zero(k * n, k * n);
  for (int j = 0; j < k; ++j) u.block(j * n, j * n, n, n) = pass.cast<Complex>().asDiagonal();
  return embed(Transform::passive(std::move(u), ModeLayout(k, n)), modes, layout);
}

}  // namespace mmg

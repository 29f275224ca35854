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

#include "mmg/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "mmg/error.hpp"

namespace mmg {
namespace {

constexpr double kRangeTolerance = 1e-13;
constexpr double kImagTolerance = 1e-10;

void validate_modes(const std::vector<int>& modes, const char* where) {
  if (modes.empty()) throw InvalidArgument(std::string(where) + ": no spatial modes");
  std::vector<int> s = modes;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw InvalidArgument(std::string(where) + ": spatial modes must be distinct");
  }
  if (s.front() < 0) throw DimensionError(std::string(where) + ": negative spatial mode");
}

// Inverse square root of a determinant that must be real and positive.
double inv_sqrt_real_det(Complex det, const char* where) {
  if (std::abs(det.imag()) > kImagTolerance * std::max(1.0, std::abs(det)) ||
      !(det.real() > 0.0)) {
    throw UnphysicalState(std::string(where) + ": determinant is not real positive (" +
                          std::to_string(det.real()) + ", " + std::to_string(det.imag()) + ")");
  }
  return 1.0 / std::sqrt(det.real());
}

double clamp_probability(double p, double tol, const char* where) {
  if (p < 0.0) {
    if (p < -tol) {
      throw UnphysicalState(std::string(where) + ": negative probability " + std::to_string(p));
    }
    spdlog::debug("{}: clamped {:.3e} to 0", where, p);
    return 0.0;
  }
  if (p > 1.0) {
    if (p > 1.0 + tol) {
      throw UnphysicalState(std::string(where) + ": probability above one " + std::to_string(p));
    }
    return 1.0;
  }
  return p;
}

// Orthonormal basis of the numerical range of a Hermitian matrix by pivoted
// Gram-Schmidt; columns with residual norm below tol are dropped.
CMatrix hermitian_range(const CMatrix& a, double tol) {
  const int d = static_cast<int>(a.rows());
  CMatrix r = a;
  std::vector<CVector> basis;
  RVector norms = r.colwise().squaredNorm();
  while (static_cast<int>(basis.size()) < d) {
    int j = 0;
    const double best = norms.maxCoeff(&j);
    if (!(std::sqrt(best) > tol)) break;
    CVector v = r.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const CVector& b : basis) v -= b * b.dot(v);
    }
    const double nv = v.norm();
    if (!(nv > 0.0)) break;
    v /= nv;
    r -= v * (v.adjoint() * r);
    norms = r.colwise().squaredNorm();
    basis.push_back(std::move(v));
  }
  CMatrix p(d, static_cast<int>(basis.size()));
  for (std::size_t c = 0; c < basis.size(); ++c) p.col(static_cast<int>(c)) = basis[c];
  return p;
}

TruncatedSeries inv_sqrt_from_log_det(TruncatedSeries log_det, const char* where) {
  const Complex c0 = log_det.constant();
  if (std::abs(std::remainder(c0.imag(), 2.0 * kPi)) > 1e-8) {
    throw UnphysicalState(std::string(where) + ": series constant term is not positive");
  }
  log_det[0] = c0.real();
  log_det *= -0.5;
  return log_det.exp();
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

DetectionPattern DetectionPattern::pnr(std::vector<int> modes, std::vector<int> counts) {
  validate_modes(modes, "DetectionPattern");
  if (modes.size() != counts.size()) {
    throw DimensionError("DetectionPattern: one count per mode required");
  }
  for (int c : counts) {
    if (c < 0) throw InvalidArgument("DetectionPattern: counts must be non-negative");
  }
  DetectionPattern p;
  p.pnr_ = true;
  p.modes_ = std::move(modes);
  p.counts_ = std::move(counts);
  return p;
}

DetectionPattern DetectionPattern::threshold(std::vector<int> modes, std::vector<Click> clicks) {
  validate_modes(modes, "DetectionPattern");
  if (modes.size() != clicks.size()) {
    throw DimensionError("DetectionPattern: one click flag per mode required");
  }
  DetectionPattern p;
  p.pnr_ = false;
  p.modes_ = std::move(modes);
  p.clicks_ = std::move(clicks);
  return p;
}

int DetectionPattern::total_count() const {
  return std::accumulate(counts_.begin(), counts_.end(), 0);
}

double PnrTable::at(std::span<const int> counts) const {
  return probabilities[shape->flat_index(counts)];
}

GaussianDetector::GaussianDetector(const CovarianceState& state, std::vector<int> modes,
                                   DetectionLimits limits)
    : modes_(std::move(modes)), limits_(limits), n_spectral_(state.layout().n_spectral()) {
  validate_modes(modes_, "GaussianDetector");
  if (modes_.size() > 32) throw LimitExceeded("GaussianDetector: at most 32 spatial modes");
  CovarianceState reduced = reduce(state, modes_);
  CMatrix st = reduced.sigma_tilde();
  if (!limits_.compress) {
    sigma_tilde_ = std::move(st);
    return;
  }
  const double scale = std::max(1.0, st.colwise().norm().maxCoeff());
  CMatrix p = hermitian_range(st, kRangeTolerance * scale);
  const int k = static_cast<int>(modes_.size());
  const int half = k * n_spectral_;
  if (p.cols() == 0) {
    lambda_.resize(0);
    gram_.assign(k, CMatrix(0, 0));
    return;
  }
  CMatrix e = p.adjoint() * st * p;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (e + e.adjoint()));
  lambda_ = es.eigenvalues();
  CMatrix q = p * es.eigenvectors();
  const int r = static_cast<int>(q.cols());
  gram_.assign(k, CMatrix::Zero(r, r));
  for (int i = 0; i < k; ++i) {
    auto qa = q.middleRows(i * n_spectral_, n_spectral_);
    auto qc = q.middleRows(half + i * n_spectral_, n_spectral_);
    gram_[i] = qa.adjoint() * qa + qc.adjoint() * qc;
  }
}

CMatrix GaussianDetector::weighted_matrix(std::span<const double> weights) const {
  const int k = static_cast<int>(modes_.size());
  if (static_cast<int>(weights.size()) != k) {
    throw DimensionError("GaussianDetector: one weight per mode required");
  }
  if (!limits_.compress) {
    const int d = static_cast<int>(sigma_tilde_.rows());
    const int half = d / 2;
    CMatrix x = 0.5 * sigma_tilde_;
    for (int row = 0; row < d; ++row) x.row(row) *= weights[(row % half) / n_spectral_];
    x += CMatrix::Identity(d, d);
    return x;
  }
  const int r = rank();
  CMatrix g = CMatrix::Zero(r, r);
  for (int i = 0; i < k; ++i) {
    if (weights[i] != 0.0) g += weights[i] * gram_[i];
  }
  CMatrix x = (0.5 * lambda_).cast<Complex>().asDiagonal() * g;
  x += CMatrix::Identity(r, r);
  return x;
}

double GaussianDetector::weighted_off(std::span<const double> weights) const {
  CMatrix x = weighted_matrix(weights);
  if (x.rows() == 0) return 1.0;
  return inv_sqrt_real_det(Eigen::PartialPivLU<CMatrix>(x).determinant(), "vacuum projection");
}

double GaussianDetector::p_off(std::uint32_t mask) const {
  std::vector<double> w(modes_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = (mask >> i) & 1u ? 1.0 : 0.0;
  return weighted_off(w);
}

double GaussianDetector::p_threshold(std::uint32_t on_mask, std::uint32_t off_mask) const {
  if (on_mask & off_mask) throw InvalidArgument("p_threshold: on and off sets overlap");
  std::vector<int> on;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if ((on_mask >> i) & 1u) on.push_back(static_cast<int>(i));
  }
  if (static_cast<int>(on.size()) > limits_.max_threshold_modes) {
    throw LimitExceeded("p_threshold: " + std::to_string(on.size()) +
                        " on-modes exceed the configured limit");
  }
  double total = 0.0;
  const std::uint32_t subsets = 1u << on.size();
  for (std::uint32_t b = 0; b < subsets; ++b) {
    std::uint32_t mask = off_mask;
    int size = 0;
    for (std::size_t j = 0; j < on.size(); ++j) {
      if ((b >> j) & 1u) {
        mask |= 1u << on[j];
        ++size;
      }
    }
    const double p = p_off(mask);
    total += size % 2 == 0 ? p : -p;
  }
  return clamp_probability(total, limits_.clamp_tolerance, "p_threshold");
}

TruncatedSeries GaussianDetector::inv_sqrt_det_series(std::vector<int> orders) const {
  const int k = static_cast<int>(modes_.size());
  if (static_cast<int>(orders.size()) != k) {
    throw DimensionError("inv_sqrt_det_series: one order per mode required");
  }
  if (!limits_.compress) {
    std::vector<int> row_variable(sigma_tilde_.rows());
    const int half = static_cast<int>(sigma_tilde_.rows()) / 2;
    for (int row = 0; row < 2 * half; ++row) row_variable[row] = (row % half) / n_spectral_;
    return series_inv_sqrt_det(sigma_tilde_, row_variable, std::move(orders));
  }
  auto shape = std::make_shared<const SeriesShape>(std::move(orders));
  const int r = rank();
  if (r == 0) return TruncatedSeries(shape, 1.0);

  // log det(X0 + sum_i s_i B_i) = log det X0 + tr log(I + sum_i s_i A_i) with
  // A_i = X0^-1 B_i. The s^m coefficient of the trace term is
  // (-1)^(|m|+1) / |m| * tr M_m, where M_m = sum_i A_i M_{m - e_i}, M_0 = I.
  std::vector<double> ones(k, 1.0);
  Eigen::PartialPivLU<CMatrix> lu(weighted_matrix(ones));
  std::vector<CMatrix> a(k);
  for (int i = 0; i < k; ++i) {
    if (shape->orders()[i] > 0) {
      a[i] = lu.solve((0.5 * lambda_).cast<Complex>().asDiagonal() * gram_[i]);
    }
  }
  TruncatedSeries log_det(shape);
  Complex c0 = lu.permutationP().determinant() < 0 ? Complex(0.0, kPi) : Complex(0.0);
  for (int j = 0; j < r; ++j) c0 += std::log(lu.matrixLU()(j, j));
  log_det[0] = c0;

  std::vector<std::vector<std::size_t>> levels(shape->max_total_degree() + 1);
  for (std::size_t f = 0; f < shape->size(); ++f) {
    const std::vector<int> m = shape->multi_index(f);
    levels[std::accumulate(m.begin(), m.end(), 0)].push_back(f);
  }
  std::unordered_map<std::size_t, CMatrix> prev;
  prev.emplace(0, CMatrix::Identity(r, r));
  for (std::size_t deg = 1; deg < levels.size(); ++deg) {
    std::unordered_map<std::size_t, CMatrix> cur;
    for (std::size_t f : levels[deg]) {
      const std::vector<int> m = shape->multi_index(f);
      CMatrix acc = CMatrix::Zero(r, r);
      for (int i = 0; i < k; ++i) {
        if (m[i] == 0) continue;
        acc.noalias() += a[i] * prev.at(f - shape->stride(i));
      }
      const double sign = deg % 2 == 1 ? 1.0 : -1.0;
      log_det[f] = sign / static_cast<double>(deg) * acc.trace();
      cur.emplace(f, std::move(acc));
    }
    prev = std::move(cur);
  }
  return inv_sqrt_from_log_det(std::move(log_det), "inv_sqrt_det_series");
}

PnrTable GaussianDetector::pnr_table(std::vector<int> max_counts) const {
  const int total = std::accumulate(max_counts.begin(), max_counts.end(), 0);
  if (total > limits_.pnr_cutoff) {
    throw LimitExceeded("p_pnr: total count " + std::to_string(total) +
                        " exceeds the configured cutoff " + std::to_string(limits_.pnr_cutoff));
  }
  TruncatedSeries f = inv_sqrt_det_series(std::move(max_counts));
  PnrTable table{f.shape_ptr(), std::vector<double>(f.size())};
  for (std::size_t c = 0; c < f.size(); ++c) {
    std::vector<int> n = table.shape->multi_index(c);
    const int sum = std::accumulate(n.begin(), n.end(), 0);
    const double p = (sum % 2 == 0 ? 1.0 : -1.0) * f[c].real();
    table.probabilities[c] = clamp_probability(p, limits_.clamp_tolerance, "p_pnr");
  }
  return table;
}

double GaussianDetector::p_pnr(std::span<const int> counts) const {
  std::vector<int> c(counts.begin(), counts.end());
  PnrTable t = pnr_table(c);
  return t.at(c);
}

double GaussianDetector::fanout_pnr(std::span<const int> counts, int m) const {
  const int k = static_cast<int>(modes_.size());
  if (static_cast<int>(counts.size()) != k) {
    throw DimensionError("fanout_pnr: one count per mode required");
  }
  for (int c : counts) {
    if (c < 0 || c > m) throw InvalidArgument("fanout_pnr: counts must lie in [0, m]");
  }
  double prefactor = 1.0;
  for (int c : counts) prefactor *= binomial(m, c);
  std::vector<int> l(k, 0);
  std::vector<double> w(k);
  double total = 0.0;
  while (true) {
    double coeff = 1.0;
    for (int i = 0; i < k; ++i) {
      coeff *= (l[i] % 2 == 0 ? 1.0 : -1.0) * binomial(counts[i], l[i]);
      w[i] = static_cast<double>(m - counts[i] + l[i]) / m;
    }
    total += coeff * weighted_off(w);
    int v = k - 1;
    while (v >= 0 && l[v] == counts[v]) l[v--] = 0;
    if (v < 0) break;
    ++l[v];
  }
  return clamp_probability(prefactor * total, 1e-8, "fanout_pnr");
}

double p_vacuum(const CovarianceState& state, std::span<const int> modes) {
  CovarianceState reduced = reduce(state, modes);
  const int d = reduced.layout().dim();
  CMatrix x = 0.5 * (reduced.sigma() + CMatrix::Identity(d, d));
  Eigen::LLT<CMatrix> llt(x);
  if (llt.info() == Eigen::Success) {
    double log_det = 0.0;
    for (int i = 0; i < d; ++i) log_det += 2.0 * std::log(llt.matrixL()(i, i).real());
    return std::min(1.0, std::exp(-0.5 * log_det));
  }
  return inv_sqrt_real_det(Eigen::PartialPivLU<CMatrix>(x).determinant(), "p_vacuum");
}

double p_threshold(const CovarianceState& state, std::span<const int> on, std::span<const int> off,
                   const DetectionLimits& limits) {
  std::vector<int> modes(on.begin(), on.end());
  modes.insert(modes.end(), off.begin(), off.end());
  if (modes.empty()) return 1.0;
  GaussianDetector det(state, modes, limits);
  const std::uint32_t on_mask = (1u << on.size()) - 1u;
  const std::uint32_t all = modes.size() == 32 ? ~0u : (1u << modes.size()) - 1u;
  return det.p_threshold(on_mask, all & ~on_mask);
}

double p_pnr(const CovarianceState& state, std::span<const int> modes, std::span<const int> counts,
             const DetectionLimits& limits) {
  GaussianDetector det(state, std::vector<int>(modes.begin(), modes.end()), limits);
  return det.p_pnr(counts);
}

double probability(const CovarianceState& state, const DetectionPattern& pattern,
                   const DetectionLimits& limits) {
  if (pattern.is_pnr()) return p_pnr(state, pattern.modes(), pattern.counts(), limits);
  std::vector<int> on;
  std::vector<int> off;
  for (std::size_t i = 0; i < pattern.modes().size(); ++i) {
    (pattern.clicks()[i] == Click::on ? on : off).push_back(pattern.modes()[i]);
  }
  return p_threshold(state, on, off, limits);
}

std::vector<double> pnr_distribution(const CovarianceState& state, int mode, int n_max,
                                     const DetectionLimits& limits) {
  if (n_max < 0) throw InvalidArgument("pnr_distribution: n_max must be non-negative");
  GaussianDetector det(state, {mode}, limits);
  PnrTable t = det.pnr_table({n_max});
  return t.probabilities;
}

double fanout_pnr(const CovarianceState& state, std::span<const int> modes,
                  std::span<const int> counts, int m, const DetectionLimits& limits) {
  GaussianDetector det(state, std::vector<int>(modes.begin(), modes.end()), limits);
  return det.fanout_pnr(counts, m);
}

TruncatedSeries series_inv_sqrt_det(const CMatrix& sigma_tilde, std::span<const int> row_variable,
                                    std::vector<int> orders) {
  const int d = static_cast<int>(sigma_tilde.rows());
  if (sigma_tilde.cols() != d || static_cast<int>(row_variable.size()) != d) {
    throw DimensionError("series_inv_sqrt_det: need a square matrix and one variable per row");
  }
  auto shape = std::make_shared<const SeriesShape>(std::move(orders));
  for (int v : row_variable) {
    if (v < 0 || v >= shape->variables()) {
      throw DimensionError("series_inv_sqrt_det: row variable out of range");
    }
  }
  if (d == 0) return TruncatedSeries(shape, 1.0);
  SeriesMatrix m(d, shape);
  for (int a = 0; a < d; ++a) {
    const int v = row_variable[a];
    const bool active = shape->orders()[v] > 0;
    for (int b = 0; b < d; ++b) {
      Complex* e = m.entry(a, b);
      const Complex half = 0.5 * sigma_tilde(a, b);
      e[0] = (a == b ? 1.0 : 0.0) + half;
      if (active) e[shape->stride(v)] = half;
    }
  }
  return inv_sqrt_from_log_det(std::move(m).log_det(), "series_inv_sqrt_det");
}

}  // namespace mmg

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

#include "mmg/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmg/error.hpp"

namespace mmg {
namespace {

constexpr std::size_t kMaxSeriesSize = std::size_t{1} << 22;

}  // namespace

SeriesShape::SeriesShape(std::vector<int> orders) : orders_(std::move(orders)) {
  if (orders_.empty()) throw InvalidArgument("SeriesShape: need at least one variable");
  size_ = 1;
  max_degree_ = 0;
  for (int o : orders_) {
    if (o < 0) throw InvalidArgument("SeriesShape: orders must be non-negative");
    size_ *= static_cast<std::size_t>(o) + 1;
    max_degree_ += o;
    if (size_ > kMaxSeriesSize) throw LimitExceeded("SeriesShape: coefficient box too large");
  }
  const int k = variables();
  strides_.assign(k, 1);
  for (int i = k - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * (orders_[i + 1] + 1);

  term_offsets_.assign(size_ + 1, 0);
  std::vector<int> a(k);
  for (std::size_t c = 0; c < size_; ++c) {
    term_offsets_[c] = terms_.size();
    std::vector<int> mc = multi_index(c);
    std::fill(a.begin(), a.end(), 0);
    while (true) {
      std::size_t fa = flat_index(a);
      terms_.push_back({static_cast<std::uint32_t>(fa), static_cast<std::uint32_t>(c - fa),
                        static_cast<std::uint32_t>(c)});
      int v = k - 1;
      while (v >= 0 && a[v] == mc[v]) a[v--] = 0;
      if (v < 0) break;
      ++a[v];
    }
  }
  term_offsets_[size_] = terms_.size();
}

std::size_t SeriesShape::flat_index(std::span<const int> multi) const {
  if (static_cast<int>(multi.size()) != variables()) {
    throw DimensionError("SeriesShape: multi-index has wrong length");
  }
  std::size_t f = 0;
  for (int i = 0; i < variables(); ++i) {
    if (multi[i] < 0 || multi[i] > orders_[i]) {
      throw DimensionError("SeriesShape: multi-index outside the box");
    }
    f += strides_[i] * multi[i];
  }
  return f;
}

std::vector<int> SeriesShape::multi_index(std::size_t flat) const {
  std::vector<int> m(variables());
  for (int i = 0; i < variables(); ++i) {
    m[i] = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
  return m;
}

// Plain real arithmetic; std::complex multiplication carries inf/nan
// recovery that dominates these loops.
template <int Sign>
static void fused_product(const std::vector<SeriesShape::Term>& terms, Complex* dst,
                          const Complex* a, const Complex* b) {
  auto* d = reinterpret_cast<double*>(dst);
  const auto* x = reinterpret_cast<const double*>(a);
  const auto* y = reinterpret_cast<const double*>(b);
  for (const SeriesShape::Term& t : terms) {
    const double xr = x[2 * t.a], xi = x[2 * t.a + 1];
    const double yr = y[2 * t.b], yi = y[2 * t.b + 1];
    d[2 * t.c] += Sign * (xr * yr - xi * yi);
    d[2 * t.c + 1] += Sign * (xr * yi + xi * yr);
  }
}

void SeriesShape::multiply_add(Complex* dst, const Complex* a, const Complex* b) const {
  fused_product<1>(terms_, dst, a, b);
}

void SeriesShape::multiply_sub(Complex* dst, const Complex* a, const Complex* b) const {
  fused_product<-1>(terms_, dst, a, b);
}

TruncatedSeries::TruncatedSeries(std::shared_ptr<const SeriesShape> shape, Complex constant)
    : shape_(std::move(shape)), coeffs_(shape_->size(), Complex(0.0)) {
  coeffs_[0] = constant;
}

TruncatedSeries TruncatedSeries::variable(std::shared_ptr<const SeriesShape> shape, int var,
                                          Complex constant) {
  TruncatedSeries s(std::move(shape), constant);
  if (var < 0 || var >= s.shape().variables()) {
    throw DimensionError("TruncatedSeries::variable: index out of range");
  }
  if (s.shape().orders()[var] > 0) s.coeffs_[s.shape().stride(var)] = 1.0;
  return s;
}

Complex TruncatedSeries::coefficient(std::span<const int> multi) const {
  return coeffs_[shape_->flat_index(multi)];
}

void TruncatedSeries::check_shape(const TruncatedSeries& other) const {
  if (shape_ != other.shape_ && shape_->orders() != other.shape_->orders()) {
    throw DimensionError("TruncatedSeries: shapes differ");
  }
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
  check_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other) {
  check_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const TruncatedSeries& other) {
  check_shape(other);
  std::vector<Complex> out(coeffs_.size(), Complex(0.0));
  shape_->multiply_add(out.data(), coeffs_.data(), other.coeffs_.data());
  coeffs_ = std::move(out);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(Complex scalar) {
  for (Complex& c : coeffs_) c *= scalar;
  return *this;
}

TruncatedSeries TruncatedSeries::inverse() const {
  const Complex p0 = coeffs_[0];
  if (p0 == Complex(0.0)) throw UnphysicalState("TruncatedSeries::inverse: zero constant term");
  TruncatedSeries q(shape_);
  q.coeffs_[0] = 1.0 / p0;
  const auto& terms = shape_->terms();
  for (std::size_t c = 1; c < coeffs_.size(); ++c) {
    Complex acc = 0.0;
    for (std::size_t t = shape_->term_offset(c); t < shape_->term_offset(c + 1); ++t) {
      if (terms[t].a != 0) acc += coeffs_[terms[t].a] * q.coeffs_[terms[t].b];
    }
    q.coeffs_[c] = -acc / p0;
  }
  return q;
}

TruncatedSeries TruncatedSeries::log() const {
  const Complex p0 = coeffs_[0];
  if (p0 == Complex(0.0)) throw UnphysicalState("TruncatedSeries::log: zero constant term");
  TruncatedSeries u = *this;
  u *= 1.0 / p0;
  u.coeffs_[0] = 0.0;
  const int d = shape_->max_total_degree();
  TruncatedSeries result(shape_);
  if (d > 0) {
    // log(1 + u) = u (1 - u (1/2 - u (1/3 - ...)))
    TruncatedSeries h(shape_, (d % 2 == 1 ? 1.0 : -1.0) / d);
    for (int k = d - 1; k >= 1; --k) {
      h = u * h;
      h.coeffs_[0] += (k % 2 == 1 ? 1.0 : -1.0) / k;
    }
    result = u * h;
  }
  result.coeffs_[0] = std::log(p0);
  return result;
}

TruncatedSeries TruncatedSeries::exp() const {
  TruncatedSeries w = *this;
  const Complex e0 = std::exp(coeffs_[0]);
  w.coeffs_[0] = 0.0;
  TruncatedSeries h(shape_, 1.0);
  for (int k = shape_->max_total_degree(); k >= 1; --k) {
    h = w * h;
    h *= 1.0 / k;
    h.coeffs_[0] += 1.0;
  }
  h *= e0;
  return h;
}

double TruncatedSeries::max_abs_difference(const TruncatedSeries& other) const {
  check_shape(other);
  double m = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    m = std::max(m, std::abs(coeffs_[i] - other.coeffs_[i]));
  }
  return m;
}

TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  TruncatedSeries r = a;
  r *= b;
  return r;
}
TruncatedSeries operator*(TruncatedSeries a, Complex s) { return a *= s; }

SeriesMatrix::SeriesMatrix(int n, std::shared_ptr<const SeriesShape> shape)
    : n_(n), shape_(std::move(shape)), stride_(shape_->size()),
      data_(static_cast<std::size_t>(n) * n * stride_, Complex(0.0)) {
  if (n < 0) throw InvalidArgument("SeriesMatrix: negative size");
}

TruncatedSeries SeriesMatrix::log_det() && {
  TruncatedSeries result(shape_);
  int swaps = 0;
  std::vector<Complex> l(stride_);
  for (int k = 0; k < n_; ++k) {
    int p = k;
    double best = std::abs(entry(k, k)[0]);
    for (int i = k + 1; i < n_; ++i) {
      double a = std::abs(entry(i, k)[0]);
      if (a > best) {
        best = a;
        p = i;
      }
    }
    if (best == 0.0) throw UnphysicalState("SeriesMatrix::log_det: singular constant term");
    if (p != k) {
      for (int j = k; j < n_; ++j) std::swap_ranges(entry(k, j), entry(k, j) + stride_, entry(p, j));
      ++swaps;
    }
    TruncatedSeries pivot(shape_);
    std::copy(entry(k, k), entry(k, k) + stride_, pivot.data());
    result += pivot.log();
    TruncatedSeries pinv = pivot.inverse();
    for (int i = k + 1; i < n_; ++i) {
      const Complex* e = entry(i, k);
      if (std::all_of(e, e + stride_, [](Complex z) { return z == Complex(0.0); })) continue;
      std::fill(l.begin(), l.end(), Complex(0.0));
      shape_->multiply_add(l.data(), e, pinv.data());
      for (int j = k + 1; j < n_; ++j) shape_->multiply_sub(entry(i, j), l.data(), entry(k, j));
    }
  }
  result[0] += Complex(0.0, kPi * (swaps % 2));
  return result;
}

}  // namespace mmg

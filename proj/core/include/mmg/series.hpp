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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mmg/linalg.hpp"

namespace mmg {

/**
 * @brief Multi-index box {m : 0 <= m_i <= orders_i} with a precomputed
 * product table.
 *
 * Flat indices are mixed-radix with the last variable fastest, so a
 * componentwise-smaller multi-index always has a smaller flat index.
 */
class SeriesShape {
 public:
  struct Term {
    std::uint32_t a;
    std::uint32_t b;
    std::uint32_t c;  // c = a + b
  };

  explicit SeriesShape(std::vector<int> orders);

  int variables() const { return static_cast<int>(orders_.size()); }
  const std::vector<int>& orders() const { return orders_; }
  std::size_t size() const { return size_; }
  int max_total_degree() const { return max_degree_; }

  std::size_t flat_index(std::span<const int> multi) const;
  std::vector<int> multi_index(std::size_t flat) const;
  std::size_t stride(int variable) const { return strides_[variable]; }

  /// All (a, b, a+b) triples inside the box, sorted by c.
  const std::vector<Term>& terms() const { return terms_; }
  /// Terms with c == flat occupy [term_offset(flat), term_offset(flat + 1)).
  std::size_t term_offset(std::size_t flat) const { return term_offsets_[flat]; }

  void multiply_add(Complex* dst, const Complex* a, const Complex* b) const;
  void multiply_sub(Complex* dst, const Complex* a, const Complex* b) const;

 private:
  std::vector<int> orders_;
  std::vector<std::size_t> strides_;
  std::size_t size_;
  int max_degree_;
  std::vector<Term> terms_;
  std::vector<std::size_t> term_offsets_;
};

/// Truncated multivariate power series over a shared shape.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::shared_ptr<const SeriesShape> shape, Complex constant = 0.0);

  /// The series s_var (plus an optional constant).
  static TruncatedSeries variable(std::shared_ptr<const SeriesShape> shape, int var,
                                  Complex constant = 0.0);

  const SeriesShape& shape() const { return *shape_; }
  const std::shared_ptr<const SeriesShape>& shape_ptr() const { return shape_; }
  std::size_t size() const { return coeffs_.size(); }

  Complex constant() const { return coeffs_[0]; }
  Complex& operator[](std::size_t flat) { return coeffs_[flat]; }
  Complex operator[](std::size_t flat) const { return coeffs_[flat]; }
  Complex coefficient(std::span<const int> multi) const;
  Complex* data() { return coeffs_.data(); }
  const Complex* data() const { return coeffs_.data(); }

  TruncatedSeries& operator+=(const TruncatedSeries& other);
  TruncatedSeries& operator-=(const TruncatedSeries& other);
  TruncatedSeries& operator*=(const TruncatedSeries& other);
  TruncatedSeries& operator*=(Complex scalar);

  /// Requires a nonzero constant term.
  TruncatedSeries inverse() const;
  /// Principal logarithm; requires a nonzero constant term.
  TruncatedSeries log() const;
  TruncatedSeries exp() const;

  double max_abs_difference(const TruncatedSeries& other) const;

 private:
  void check_shape(const TruncatedSeries& other) const;

  std::shared_ptr<const SeriesShape> shape_;
  std::vector<Complex> coeffs_;
};

TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b);
TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b);
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(TruncatedSeries a, Complex s);

/**
 * @brief Square matrix with series entries, stored entry-major.
 */
class SeriesMatrix {
 public:
  SeriesMatrix(int n, std::shared_ptr<const SeriesShape> shape);

  int n() const { return n_; }
  const SeriesShape& shape() const { return *shape_; }
  Complex* entry(int row, int col) { return &data_[(std::size_t(row) * n_ + col) * stride_]; }
  const Complex* entry(int row, int col) const {
    return &data_[(std::size_t(row) * n_ + col) * stride_];
  }

  /**
   * Logarithm of the determinant via LU with partial pivoting on the constant
   * terms. The constant term of the result is the principal log of the
   * product of pivots plus i*pi per row swap; callers choose the branch.
   * Consumes the matrix.
   */
  TruncatedSeries log_det() &&;

 private:
  int n_;
  std::shared_ptr<const SeriesShape> shape_;
  std::size_t stride_;
  std::vector<Complex> data_;
};

}  // namespace mmg

// Copyright 2026 The outmat Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "outmat/counter.hpp"
#include "outmat/errors.hpp"
#include "outmat/rng.hpp"
#include "outmat/scalar.hpp"

namespace outmat {

/// Dense row-major matrix. Public element access is 1-based, X(i, j) being
/// the entry in row i and column j; storage offsets are 0-based.
template <class T>
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), entries_(checked_size(rows, cols), fill) {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != checked_size(rows, cols)) {
      throw ShapeError("matrix entry count " + std::to_string(entries_.size()) +
                       " does not match " + std::to_string(rows) + "x" +
                       std::to_string(cols));
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return entries_[offset(i, j)]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return entries_[offset(i, j)];
  }

  // 0-based access for loops that do not mirror a formula.
  T& at0(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const T& at0(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<const T> entries() const { return entries_; }
  std::span<T> entries() { return entries_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  static std::size_t checked_size(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
      throw ShapeError("matrix dimensions must be positive");
    }
    return rows * cols;
  }

  std::size_t offset(std::size_t i, std::size_t j) const {
    if (i < 1 || i > rows_ || j < 1 || j > cols_) {
      throw ShapeError("index (" + std::to_string(i) + "," + std::to_string(j) +
                       ") outside " + std::to_string(rows_) + "x" +
                       std::to_string(cols_));
    }
    return (i - 1) * cols_ + (j - 1);
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> entries_;
};

/// Bijection on {1, ..., k}, stored as its forward map.
class Permutation {
 public:
  Permutation() = default;
  // Throws KeyError unless `forward` is a bijection on {1..k}.
  explicit Permutation(std::vector<std::size_t> forward);

  static Permutation identity(std::size_t k);
  // Uniform over all k! permutations (Fisher-Yates).
  static Permutation random(std::size_t k, CounterRng& rng);

  std::size_t size() const { return forward_.size(); }
  // 1-based image of i.
  std::size_t operator()(std::size_t i) const { return forward_.at(i - 1); }
  Permutation inverse() const;
  std::span<const std::size_t> forward() const { return forward_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> forward_;
};

template <ScalarBackend F>
Matrix<typename F::value_type> identity_matrix(const F& f, std::size_t k) {
  Matrix<typename F::value_type> id(k, k, f.zero());
  for (std::size_t i = 1; i <= k; ++i) id(i, i) = f.one();
  return id;
}

/// C = AB with C(i,j) accumulated as A(i,1)B(1,j) + A(i,2)B(2,j) + ... in
/// that order. Counts n*m*s multiplications and m*(n-1)*s additions.
template <ScalarBackend F>
Matrix<typename F::value_type> matmul(const F& f,
                                      const Matrix<typename F::value_type>& a,
                                      const Matrix<typename F::value_type>& b,
                                      OpCounter* counter = nullptr) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " times " +
                     std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  const std::size_t m = a.rows(), n = a.cols(), s = b.cols();
  Matrix<typename F::value_type> c(m, s, f.zero());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      auto acc = f.mul(a.at0(i, 0), b.at0(0, j));
      for (std::size_t k = 1; k < n; ++k) {
        acc = f.add(acc, f.mul(a.at0(i, k), b.at0(k, j)));
      }
      c.at0(i, j) = acc;
    }
  }
  if (counter != nullptr) {
    OpCounter::bump(counter->muls, m * n * s);
    OpCounter::bump(counter->adds, m * (n - 1) * s);
  }
  return c;
}

/// y = A r, left-to-right accumulation; one mac per term.
template <ScalarBackend F>
std::vector<typename F::value_type> mat_vec(
    const F& f, const Matrix<typename F::value_type>& a,
    std::span<const typename F::value_type> r, OpCounter* counter = nullptr) {
  if (a.cols() != r.size()) {
    throw ShapeError("mat_vec: " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " times vector of length " +
                     std::to_string(r.size()));
  }
  std::vector<typename F::value_type> y(a.rows(), f.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto acc = f.mul(a.at0(i, 0), r[0]);
    for (std::size_t k = 1; k < a.cols(); ++k) {
      acc = f.add(acc, f.mul(a.at0(i, k), r[k]));
    }
    y[i] = acc;
  }
  if (counter != nullptr) OpCounter::bump(counter->macs, a.rows() * a.cols());
  return y;
}

namespace detail {
template <ScalarBackend F>
void check_perm_diag(const F& f, std::span<const typename F::value_type> coeffs,
                     const Permutation& pi) {
  if (coeffs.size() != pi.size() || coeffs.empty()) {
    throw ShapeError("coefficient count " + std::to_string(coeffs.size()) +
                     " does not match permutation size " +
                     std::to_string(pi.size()));
  }
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (f.is_zero(coeffs[i])) {
      throw KeyError("zero coefficient at position " + std::to_string(i + 1));
    }
  }
}
}  // namespace detail

/// Scaled permutation matrix P(i, j) = c_i * delta(pi(i), j).
template <ScalarBackend F>
Matrix<typename F::value_type> perm_diag_matrix(
    const F& f, std::span<const typename F::value_type> coeffs,
    const Permutation& pi) {
  detail::check_perm_diag(f, coeffs, pi);
  const std::size_t k = pi.size();
  Matrix<typename F::value_type> p(k, k, f.zero());
  for (std::size_t i = 1; i <= k; ++i) p(i, pi(i)) = coeffs[i - 1];
  return p;
}

/// Inverse of perm_diag_matrix: Q(i, j) = c_j^{-1} * delta(pi^{-1}(i), j).
template <ScalarBackend F>
Matrix<typename F::value_type> perm_diag_inverse(
    const F& f, std::span<const typename F::value_type> coeffs,
    const Permutation& pi) {
  detail::check_perm_diag(f, coeffs, pi);
  const std::size_t k = pi.size();
  const Permutation pinv = pi.inverse();
  Matrix<typename F::value_type> q(k, k, f.zero());
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t j = pinv(i);
    q(i, j) = f.inv(coeffs[j - 1]);
  }
  return q;
}

template <ScalarBackend F>
bool same_matrix(const F& f, const Matrix<typename F::value_type>& a,
                 const Matrix<typename F::value_type>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::ranges::equal(a.entries(), b.entries(),
                            [&f](auto x, auto y) { return f.same(x, y); });
}

}  // namespace outmat

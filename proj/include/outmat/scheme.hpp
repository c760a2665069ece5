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

#include <cstddef>
#include <string>
#include <vector>

#include "outmat/errors.hpp"
#include "outmat/matrix.hpp"
#include "outmat/scalar.hpp"

namespace outmat {

/// Shape of one outsourced product: X is m x n, Y is n x s, Z is m x s.
struct Dims {
  std::size_t m = 1;
  std::size_t n = 1;
  std::size_t s = 1;

  friend bool operator==(const Dims&, const Dims&) = default;
};

/// The client's secret: nonzero row/column scalings and three permutations.
template <class T>
struct SecretKey {
  std::vector<T> alphas;  // length m
  std::vector<T> betas;   // length n
  std::vector<T> gammas;  // length s
  Permutation pi1;        // on {1..m}
  Permutation pi2;        // on {1..n}
  Permutation pi3;        // on {1..s}

  Dims dims() const { return {alphas.size(), betas.size(), gammas.size()}; }

  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

template <ScalarBackend F>
void validate_key(const F& f, const SecretKey<typename F::value_type>& key) {
  const Dims d = key.dims();
  if (d.m == 0 || d.n == 0 || d.s == 0) throw KeyError("empty key");
  if (key.pi1.size() != d.m || key.pi2.size() != d.n || key.pi3.size() != d.s) {
    throw KeyError("key permutation sizes do not match scalar counts");
  }
  auto check = [&f](const auto& values, const char* name) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (f.is_zero(values[i])) {
        throw KeyError(std::string("zero ") + name + " at index " +
                       std::to_string(i + 1));
      }
    }
  };
  check(key.alphas, "alpha");
  check(key.betas, "beta");
  check(key.gammas, "gamma");
}

/// Draws alphas, betas, gammas, then pi1, pi2, pi3 from `rng` in that order.
template <ScalarBackend F>
SecretKey<typename F::value_type> keygen(const F& f, Dims dims, CounterRng& rng,
                                         const KeySpan& span = {}) {
  if (dims.m == 0 || dims.n == 0 || dims.s == 0) {
    throw ConfigError("keygen: dimensions must be positive");
  }
  if (!(span.lo > 0.0) || !(span.hi >= span.lo)) {
    throw ConfigError("keygen: key span must satisfy 0 < lo <= hi");
  }
  SecretKey<typename F::value_type> key;
  auto draw = [&](std::size_t k) {
    std::vector<typename F::value_type> v(k);
    for (auto& x : v) x = f.random_key(rng, span);
    return v;
  };
  key.alphas = draw(dims.m);
  key.betas = draw(dims.n);
  key.gammas = draw(dims.s);
  key.pi1 = Permutation::random(dims.m, rng);
  key.pi2 = Permutation::random(dims.n, rng);
  key.pi3 = Permutation::random(dims.s, rng);
  return key;
}

template <class T>
struct Disguised {
  Matrix<T> x;
  Matrix<T> y;
};

/// X'(i,j) = (alpha_i / beta_j) X(pi1(i), pi2(j)),
/// Y'(i,j) = (beta_i / gamma_j) Y(pi2(i), pi3(j)).
/// The ratio is one division, then one multiplication per entry.
template <ScalarBackend F>
Disguised<typename F::value_type> transform(
    const F& f, const Matrix<typename F::value_type>& x,
    const Matrix<typename F::value_type>& y,
    const SecretKey<typename F::value_type>& key, OpCounter* counter = nullptr) {
  validate_key(f, key);
  const Dims d = key.dims();
  if (x.rows() != d.m || x.cols() != d.n || y.rows() != d.n || y.cols() != d.s) {
    throw ShapeError("transform: inputs " + std::to_string(x.rows()) + "x" +
                     std::to_string(x.cols()) + ", " + std::to_string(y.rows()) +
                     "x" + std::to_string(y.cols()) + " do not match key " +
                     std::to_string(d.m) + "," + std::to_string(d.n) + "," +
                     std::to_string(d.s));
  }
  Disguised<typename F::value_type> out{
      Matrix<typename F::value_type>(d.m, d.n, f.zero()),
      Matrix<typename F::value_type>(d.n, d.s, f.zero())};
  for (std::size_t i = 1; i <= d.m; ++i) {
    for (std::size_t j = 1; j <= d.n; ++j) {
      const auto ratio = f.div(key.alphas[i - 1], key.betas[j - 1]);
      out.x(i, j) = f.mul(ratio, x(key.pi1(i), key.pi2(j)));
    }
  }
  for (std::size_t i = 1; i <= d.n; ++i) {
    for (std::size_t j = 1; j <= d.s; ++j) {
      const auto ratio = f.div(key.betas[i - 1], key.gammas[j - 1]);
      out.y(i, j) = f.mul(ratio, y(key.pi2(i), key.pi3(j)));
    }
  }
  if (counter != nullptr) {
    OpCounter::bump(counter->scalings, d.m * d.n + d.n * d.s);
  }
  return out;
}

/// Z(i,j) = (gamma_{pi3^-1(j)} / alpha_{pi1^-1(i)}) Z'(pi1^-1(i), pi3^-1(j)).
template <ScalarBackend F>
Matrix<typename F::value_type> compose(
    const F& f, const Matrix<typename F::value_type>& zp,
    const SecretKey<typename F::value_type>& key, OpCounter* counter = nullptr) {
  validate_key(f, key);
  const Dims d = key.dims();
  if (zp.rows() != d.m || zp.cols() != d.s) {
    throw ShapeError("compose: Z' is " + std::to_string(zp.rows()) + "x" +
                     std::to_string(zp.cols()) + ", key expects " +
                     std::to_string(d.m) + "x" + std::to_string(d.s));
  }
  const Permutation pi1_inv = key.pi1.inverse();
  const Permutation pi3_inv = key.pi3.inverse();
  Matrix<typename F::value_type> z(d.m, d.s, f.zero());
  for (std::size_t i = 1; i <= d.m; ++i) {
    const std::size_t row = pi1_inv(i);
    for (std::size_t j = 1; j <= d.s; ++j) {
      const std::size_t col = pi3_inv(j);
      const auto ratio = f.div(key.gammas[col - 1], key.alphas[row - 1]);
      z(i, j) = f.mul(ratio, zp(row, col));
    }
  }
  if (counter != nullptr) OpCounter::bump(counter->scalings, d.m * d.s);
  return z;
}

/// Uniform random m x n matrix of backend entries.
template <ScalarBackend F>
Matrix<typename F::value_type> random_matrix(const F& f, std::size_t rows,
                                             std::size_t cols, CounterRng& rng) {
  Matrix<typename F::value_type> a(rows, cols, f.zero());
  for (auto& e : a.entries()) e = f.random_entry(rng);
  return a;
}

}  // namespace outmat

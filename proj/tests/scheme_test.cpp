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

#include "outmat/scheme.hpp"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace outmat {
namespace {

using testing::field_matrix;
using testing::oracle_correctness;
using testing::real_matrix;
using testing::trivial_key;

TEST(KeygenTest, SingletonPermutationsAreIdentity) {
  const RealField r;
  CounterRng rng(5);
  const auto key = keygen(r, {1, 1, 1}, rng);
  EXPECT_EQ(key.pi1, Permutation::identity(1));
  EXPECT_EQ(key.pi2, Permutation::identity(1));
  EXPECT_EQ(key.pi3, Permutation::identity(1));
}

TEST(KeygenTest, DeterministicPerSeed) {
  const RealField r;
  CounterRng a(42), b(42), c(43);
  const auto k1 = keygen(r, {2, 3, 4}, a);
  const auto k2 = keygen(r, {2, 3, 4}, b);
  EXPECT_EQ(k1, k2);
  EXPECT_NE(k1, keygen(r, {2, 3, 4}, c));
  const PrimeField f;
  CounterRng d(42), e(42);
  EXPECT_EQ(keygen(f, {2, 3, 4}, d), keygen(f, {2, 3, 4}, e));
}

TEST(KeygenTest, NonzeroScalarsAndMatchingSizes) {
  const PrimeField f(5);
  CounterRng rng(1);
  for (int k = 0; k < 50; ++k) {
    const auto key = keygen(f, {3, 4, 2}, rng);
    EXPECT_NO_THROW(validate_key(f, key));
    EXPECT_EQ(key.dims(), (Dims{3, 4, 2}));
  }
  EXPECT_THROW(keygen(f, {0, 1, 1}, rng), ConfigError);
  const RealField r;
  EXPECT_THROW(keygen(r, {1, 1, 1}, rng, KeySpan{0.0, 1.0}), ConfigError);
}

TEST(TransformTest, TrivialKeyIsIdentity) {
  const RealField r;
  CounterRng rng(3);
  const auto x = random_matrix(r, 3, 4, rng);
  const auto y = random_matrix(r, 4, 2, rng);
  const auto d = transform(r, x, y, trivial_key(r, {3, 4, 2}));
  EXPECT_EQ(d.x, x);
  EXPECT_EQ(d.y, y);
}

TEST(TransformTest, OneByOne) {
  const RealField r;
  SecretKey<double> key{{3.0}, {0.7}, {1.9}, Permutation::identity(1),
                        Permutation::identity(1), Permutation::identity(1)};
  const auto d = transform(r, real_matrix({{5.0}}), real_matrix({{2.0}}), key);
  EXPECT_EQ(d.x(1, 1), (3.0 / 0.7) * 5.0);
  EXPECT_EQ(d.y(1, 1), (0.7 / 1.9) * 2.0);
}

TEST(TransformTest, MatchesScaledPermutationMatrices) {
  const PrimeField f;
  CounterRng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto key = keygen(f, {3, 3, 3}, rng);
    const auto x = random_matrix(f, 3, 3, rng);
    const auto y = random_matrix(f, 3, 3, rng);
    const auto d = transform(f, x, y, key);
    const auto p1 = perm_diag_matrix<PrimeField>(f, key.alphas, key.pi1);
    const auto p2 = perm_diag_matrix<PrimeField>(f, key.betas, key.pi2);
    const auto p2_inv = perm_diag_inverse<PrimeField>(f, key.betas, key.pi2);
    const auto p3_inv = perm_diag_inverse<PrimeField>(f, key.gammas, key.pi3);
    EXPECT_EQ(d.x, matmul(f, p1, matmul(f, x, p2_inv)));
    EXPECT_EQ(d.y, matmul(f, p2, matmul(f, y, p3_inv)));
  }
}

TEST(TransformTest, ShapeAndKeyErrors) {
  const RealField r;
  const auto key = trivial_key(r, {2, 2, 2});
  EXPECT_THROW(transform(r, Matrix<double>(2, 3), Matrix<double>(3, 2), key), ShapeError);
  auto bad = key;
  bad.betas[1] = 0.0;
  EXPECT_THROW(transform(r, Matrix<double>(2, 2), Matrix<double>(2, 2), bad), KeyError);
  bad = key;
  bad.pi2 = Permutation::identity(3);
  EXPECT_THROW(transform(r, Matrix<double>(2, 2), Matrix<double>(2, 2), bad), KeyError);
}

TEST(ComposeTest, TrivialKeyIsIdentity) {
  const RealField r;
  CounterRng rng(8);
  const auto zp = random_matrix(r, 3, 5, rng);
  EXPECT_EQ(compose(r, zp, trivial_key(r, {3, 2, 5})), zp);
  EXPECT_THROW(compose(r, Matrix<double>(5, 3), trivial_key(r, {3, 2, 5})), ShapeError);
}

TEST(ComposeTest, OneByOne) {
  const RealField r;
  SecretKey<double> key{{0.3}, {2.0}, {7.0}, Permutation::identity(1),
                        Permutation::identity(1), Permutation::identity(1)};
  EXPECT_EQ(compose(r, real_matrix({{1.5}}), key)(1, 1), (7.0 / 0.3) * 1.5);
}

TEST(ComposeTest, FieldRoundTripEqualsProduct) {
  const PrimeField f;
  CounterRng rng(77);
  const auto key = keygen(f, {4, 3, 5}, rng);
  const auto x = random_matrix(f, 4, 3, rng);
  const auto y = random_matrix(f, 3, 5, rng);
  const auto d = transform(f, x, y, key);
  EXPECT_EQ(compose(f, matmul(f, d.x, d.y), key), matmul(f, x, y));
}

TEST(OracleTest, FieldOracleEqualsProduct) {
  const PrimeField f;
  CounterRng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto key = keygen(f, {2, 2, 2}, rng);
    const auto x = random_matrix(f, 2, 2, rng);
    const auto y = random_matrix(f, 2, 2, rng);
    EXPECT_EQ(oracle_correctness(f, x, y, key), matmul(f, x, y));
  }
  const RealField r;
  const auto x = random_matrix(r, 3, 3, rng);
  const auto y = random_matrix(r, 3, 3, rng);
  EXPECT_EQ(oracle_correctness(r, x, y, trivial_key(r, {3, 3, 3})), matmul(r, x, y));
}

TEST(OracleTest, FloatOracleAgreesWithPipelineWithinBound) {
  const RealField r;
  const double eps = FloatModel::binary64().epsilon();
  CounterRng rng(19);
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const Dims d{n, n, n};
      const auto key = keygen(r, d, rng);
      const auto x = random_matrix(r, n, n, rng);
      const auto y = random_matrix(r, n, n, rng);
      const auto oracle = oracle_correctness(r, x, y, key);
      const auto dis = transform(r, x, y, key);
      const auto z = compose(r, matmul(r, dis.x, dis.y), key);
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
          EXPECT_LE(std::fabs(oracle(i, j) - z(i, j)),
                    16.0 * static_cast<double>(n) * eps * std::fabs(z(i, j)))
              << "n=" << n;
        }
      }
    }
  }
}

// compose . server matmul . transform == XY bit-exactly over GF(2^31 - 1).
TEST(SchemePropertyTest, FieldRoundTripAllSmallShapes) {
  const PrimeField f;
  for (std::size_t m = 1; m <= 8; ++m) {
    for (std::size_t n = 1; n <= 8; ++n) {
      for (std::size_t s = 1; s <= 8; ++s) {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
          CounterRng rng = CounterRng(seed).split(m * 100 + n * 10 + s);
          const auto key = keygen(f, {m, n, s}, rng);
          const auto x = random_matrix(f, m, n, rng);
          const auto y = random_matrix(f, n, s, rng);
          const auto d = transform(f, x, y, key);
          ASSERT_EQ(compose(f, matmul(f, d.x, d.y), key), matmul(f, x, y))
              << m << "x" << n << "x" << s << " seed " << seed;
        }
      }
    }
  }
}

TEST(SchemePropertyTest, FloatRoundTripIsNotExact) {
  const RealField r;
  int differing = 0;
  constexpr int kTrials = 200;
  for (int t = 0; t < kTrials; ++t) {
    CounterRng rng = CounterRng(1000 + t);
    const auto key = keygen(r, {64, 64, 64}, rng, KeySpan{1e-3, 1e3});
    const auto x = random_matrix(r, 64, 64, rng);
    const auto y = random_matrix(r, 64, 64, rng);
    const auto d = transform(r, x, y, key);
    if (!same_matrix(r, compose(r, matmul(r, d.x, d.y), key), matmul(r, x, y))) {
      ++differing;
    }
  }
  EXPECT_GE(differing, 0.95 * kTrials);
}

TEST(SchemePropertyTest, DisguiseIsScaledPermutation) {
  const PrimeField f;
  CounterRng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto key = keygen(f, {4, 5, 3}, rng);
    const auto x = random_matrix(f, 4, 5, rng);
    const auto y = random_matrix(f, 5, 3, rng);
    const auto d = transform(f, x, y, key);
    std::vector<Fp> unscaled, original(x.entries().begin(), x.entries().end());
    for (std::size_t i = 1; i <= 4; ++i) {
      for (std::size_t j = 1; j <= 5; ++j) {
        unscaled.push_back(
            f.div(f.mul(d.x(i, j), key.betas[j - 1]), key.alphas[i - 1]));
      }
    }
    std::ranges::sort(unscaled);
    std::ranges::sort(original);
    EXPECT_EQ(unscaled, original);
  }
}

}  // namespace
}  // namespace outmat

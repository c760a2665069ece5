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

#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include "outmat/rng.hpp"

namespace outmat {

/// Element of a prime field, stored as its canonical representative in
/// [0, q). The modulus lives in the owning PrimeField.
struct Fp {
  std::uint64_t value = 0;

  friend constexpr bool operator==(Fp, Fp) = default;
  friend constexpr auto operator<=>(Fp, Fp) = default;
};

/// Magnitude range of random key scalars in the real backend. Magnitudes are
/// log-uniform in [lo, hi] with a random sign; lo == hi pins the magnitude.
struct KeySpan {
  double lo = 1e-3;
  double hi = 1e3;

  friend bool operator==(const KeySpan&, const KeySpan&) = default;
};

bool is_prime(std::uint64_t q);

/// Arithmetic over Z/qZ for a prime q < 2^63.
class PrimeField {
 public:
  using value_type = Fp;
  static constexpr bool kExact = true;
  static constexpr std::string_view kName = "field";
  // 2^31 - 1.
  static constexpr std::uint64_t kDefaultModulus = 2147483647ULL;

  // Throws ConfigError unless q is a prime below 2^63.
  explicit PrimeField(std::uint64_t q = kDefaultModulus);

  std::uint64_t modulus() const { return q_; }

  Fp zero() const { return Fp{0}; }
  Fp one() const { return Fp{1}; }
  Fp from_int(std::int64_t v) const;

  Fp add(Fp a, Fp b) const {
    std::uint64_t s = a.value + b.value;
    return Fp{s >= q_ ? s - q_ : s};
  }
  Fp sub(Fp a, Fp b) const {
    return Fp{a.value >= b.value ? a.value - b.value : a.value + q_ - b.value};
  }
  Fp neg(Fp a) const { return Fp{a.value == 0 ? 0 : q_ - a.value}; }
  Fp mul(Fp a, Fp b) const {
    return Fp{static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a.value) * b.value % q_)};
  }
  // Throws DomainError for a == 0.
  Fp inv(Fp a) const;
  Fp div(Fp a, Fp b) const { return mul(a, inv(b)); }

  bool is_zero(Fp a) const { return a.value == 0; }
  bool same(Fp a, Fp b) const { return a == b; }

  // |a - b| taken over the symmetric representatives (-q/2, q/2].
  double distance(Fp a, Fp b) const;

  Fp random_entry(CounterRng& rng) const { return Fp{rng.uniform_below(q_)}; }
  // Uniform in [1, q-1]; the span only applies to the real backend.
  Fp random_key(CounterRng& rng, const KeySpan& span = {}) const;

  std::string format(Fp a) const;
  // Decimal integer, optionally negative; reduced mod q.
  Fp parse(std::string_view text) const;

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint64_t q_;
};

/// Host binary64 arithmetic. Every operation is a single correctly-rounded
/// IEEE operation.
class RealField {
 public:
  using value_type = double;
  static constexpr bool kExact = false;
  static constexpr std::string_view kName = "float";

  double zero() const { return 0.0; }
  double one() const { return 1.0; }
  double from_int(std::int64_t v) const { return static_cast<double>(v); }

  double add(double a, double b) const { return a + b; }
  double sub(double a, double b) const { return a - b; }
  double neg(double a) const { return -a; }
  double mul(double a, double b) const { return a * b; }
  // Throws DomainError for a == 0.
  double inv(double a) const;
  double div(double a, double b) const;

  bool is_zero(double a) const { return a == 0.0; }
  // Bit-pattern equality.
  bool same(double a, double b) const;
  double distance(double a, double b) const { return std::fabs(a - b); }

  // Uniform in [0, 1).
  double random_entry(CounterRng& rng) const { return rng.uniform01(); }
  double random_key(CounterRng& rng, const KeySpan& span = {}) const;

  // Shortest decimal that round-trips.
  std::string format(double a) const;
  double parse(std::string_view text) const;

  friend bool operator==(const RealField&, const RealField&) = default;
};

template <class F>
concept ScalarBackend = requires(const F& f, typename F::value_type a,
                                 CounterRng& rng, std::string_view text) {
  { f.zero() } -> std::same_as<typename F::value_type>;
  { f.one() } -> std::same_as<typename F::value_type>;
  { f.add(a, a) } -> std::same_as<typename F::value_type>;
  { f.sub(a, a) } -> std::same_as<typename F::value_type>;
  { f.mul(a, a) } -> std::same_as<typename F::value_type>;
  { f.div(a, a) } -> std::same_as<typename F::value_type>;
  { f.inv(a) } -> std::same_as<typename F::value_type>;
  { f.is_zero(a) } -> std::same_as<bool>;
  { f.same(a, a) } -> std::same_as<bool>;
  { f.distance(a, a) } -> std::same_as<double>;
  { f.random_entry(rng) } -> std::same_as<typename F::value_type>;
  { f.random_key(rng) } -> std::same_as<typename F::value_type>;
  { f.format(a) } -> std::same_as<std::string>;
  { f.parse(text) } -> std::same_as<typename F::value_type>;
};

static_assert(ScalarBackend<PrimeField>);
static_assert(ScalarBackend<RealField>);

/// Characterization of a floating-point system by base, precision and
/// exponent range. Machine precision is chi^(1-p); rho = (chi - 1) * eps is
/// the perturbation used by the one-cell forgery.
class FloatModel {
 public:
  // Throws ConfigError for chi < 2, p < 1 or L >= U.
  FloatModel(int chi, int precision, int min_exponent, int max_exponent);

  // chi = 2, p = 53, [L, U] = [-1022, 1023], so eps = rho = 2^-52.
  static FloatModel binary64() { return FloatModel(2, 53, -1022, 1023); }

  int base() const { return chi_; }
  int precision() const { return p_; }
  int min_exponent() const { return L_; }
  int max_exponent() const { return U_; }
  double epsilon() const { return eps_; }
  double rho() const { return rho_; }

  friend bool operator==(const FloatModel&, const FloatModel&) = default;

 private:
  int chi_;
  int p_;
  int L_;
  int U_;
  double eps_;
  double rho_;
};

// First-order relative error bound of a chain of num_terms rounded
// operations: each contributes at most eps, second-order terms dropped.
double fl_error_bound(std::uint64_t num_terms, const FloatModel& model);

}  // namespace outmat

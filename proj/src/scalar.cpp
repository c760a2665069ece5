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

#include "outmat/scalar.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

#include "outmat/errors.hpp"

namespace outmat {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t q) {
  if (q < 2) return false;
  static constexpr std::uint64_t kBases[] = {2,  3,  5,  7,  11, 13,
                                             17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kBases) {
    if (q % p == 0) return q == p;
  }
  // Deterministic Miller-Rabin: the first twelve prime bases cover 2^64.
  std::uint64_t d = q - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = pow_mod(a, d, q);
    if (x == 1 || x == q - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, q);
      if (x == q - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t q) : q_(q) {
  if (q >= (std::uint64_t{1} << 63)) {
    throw ConfigError("modulus must be below 2^63: " + std::to_string(q));
  }
  if (!is_prime(q)) {
    throw ConfigError("modulus is not prime: " + std::to_string(q));
  }
}

Fp PrimeField::from_int(std::int64_t v) const {
  const auto q = static_cast<std::int64_t>(q_);
  std::int64_t r = v % q;
  if (r < 0) r += q;
  return Fp{static_cast<std::uint64_t>(r)};
}

Fp PrimeField::inv(Fp a) const {
  if (a.value == 0) throw DomainError("inverse of zero in GF(" + std::to_string(q_) + ")");
  return Fp{pow_mod(a.value, q_ - 2, q_)};
}

double PrimeField::distance(Fp a, Fp b) const {
  const std::uint64_t d = sub(a, b).value;
  return static_cast<double>(d <= q_ / 2 ? d : q_ - d);
}

Fp PrimeField::random_key(CounterRng& rng, const KeySpan&) const {
  return Fp{1 + rng.uniform_below(q_ - 1)};
}

std::string PrimeField::format(Fp a) const { return std::to_string(a.value); }

Fp PrimeField::parse(std::string_view text) const {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("not a field element: '" + std::string(text) + "'");
  }
  Fp r{v % q_};
  return negative ? neg(r) : r;
}

double RealField::inv(double a) const {
  if (a == 0.0) throw DomainError("inverse of zero");
  return 1.0 / a;
}

double RealField::div(double a, double b) const {
  if (b == 0.0) throw DomainError("division by zero");
  return a / b;
}

bool RealField::same(double a, double b) const {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

double RealField::random_key(CounterRng& rng, const KeySpan& span) const {
  double magnitude = span.lo;
  if (span.hi != span.lo) {
    const double lo = std::log(span.lo);
    const double hi = std::log(span.hi);
    magnitude = std::exp(lo + rng.uniform01() * (hi - lo));
  }
  return rng.fair_bit() ? -magnitude : magnitude;
}

std::string RealField::format(double a) const {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), a);
  return std::string(buf, ptr);
}

double RealField::parse(std::string_view text) const {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() ||
      !std::isfinite(v)) {
    throw ParseError("not a finite real: '" + std::string(text) + "'");
  }
  return v;
}

FloatModel::FloatModel(int chi, int precision, int min_exponent, int max_exponent)
    : chi_(chi), p_(precision), L_(min_exponent), U_(max_exponent) {
  if (chi < 2) throw ConfigError("float model base must be >= 2");
  if (precision < 1) throw ConfigError("float model precision must be >= 1");
  if (min_exponent >= max_exponent) {
    throw ConfigError("float model exponent range must satisfy L < U");
  }
  eps_ = chi == 2 ? std::ldexp(1.0, 1 - precision)
                  : std::pow(static_cast<double>(chi), 1 - precision);
  rho_ = (chi - 1) * eps_;
}

double fl_error_bound(std::uint64_t num_terms, const FloatModel& model) {
  return static_cast<double>(num_terms) * model.epsilon();
}

}  // namespace outmat

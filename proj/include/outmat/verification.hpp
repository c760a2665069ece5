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
#include <cmath>
#include <cstdint>
#include <string_view>
#include <type_traits>
#include <vector>

#include "outmat/counter.hpp"
#include "outmat/errors.hpp"
#include "outmat/matrix.hpp"
#include "outmat/rng.hpp"
#include "outmat/scalar.hpp"

namespace outmat {

enum class VerifyMode { kExact, kTolerance };

std::string_view to_string(VerifyMode mode);
VerifyMode parse_verify_mode(std::string_view text);

struct VerificationPolicy {
  std::size_t rounds = 1;  // l
  double lambda = 8.0;     // tolerance mode only
  VerifyMode mode = VerifyMode::kExact;

  // Throws ConfigError for rounds == 0 or lambda < 0.
  void validate() const;
};

/// One verification round. `deviation[i]` is compared against the report
/// threshold: exact mode uses |u_i - v_i| against 0, tolerance mode uses
/// |v_i / u_i - 1| against lambda * n * s * eps. Rows with u_i == 0 in
/// tolerance mode store |v_i| / |xbar_i * ybar_i| instead, so the same
/// threshold applies as an absolute fallback.
template <class T>
struct VerificationRound {
  std::vector<std::uint8_t> r;
  std::vector<T> u;  // X(Yr)
  std::vector<T> v;  // Zr
  std::vector<double> deviation;
  bool vacuous = false;  // r == 0
  bool passed = false;
  double max_deviation = 0.0;
};

template <class T>
struct VerificationReport {
  VerifyMode mode = VerifyMode::kExact;
  std::size_t rounds = 0;
  double lambda = 0.0;
  double threshold = 0.0;
  bool accepted = false;
  std::vector<VerificationRound<T>> round_data;

  double max_deviation() const {
    double worst = 0.0;
    for (const auto& rd : round_data) worst = std::max(worst, rd.max_deviation);
    return worst;
  }

  // Acceptance decision replayed from the stored deviations.
  bool accepted_at(double threshold_value) const {
    for (const auto& rd : round_data) {
      for (double dev : rd.deviation) {
        if (!(dev <= threshold_value)) return false;
      }
    }
    return true;
  }
  bool recompute_accepted() const { return accepted_at(threshold); }
};

// Fresh fair 0/1 vector of length s; the zero vector is allowed.
std::vector<std::uint8_t> random_selector(std::size_t s, CounterRng& rng);

namespace detail {

template <ScalarBackend F>
void check_product_shapes(const Matrix<typename F::value_type>& x,
                          const Matrix<typename F::value_type>& y,
                          const Matrix<typename F::value_type>& z) {
  if (x.cols() != y.rows() || z.rows() != x.rows() || z.cols() != y.cols()) {
    throw ShapeError("verification: shapes " + std::to_string(x.rows()) + "x" +
                     std::to_string(x.cols()) + ", " + std::to_string(y.rows()) +
                     "x" + std::to_string(y.cols()) + ", " +
                     std::to_string(z.rows()) + "x" + std::to_string(z.cols()) +
                     " are not m x n, n x s, m x s");
  }
}

template <ScalarBackend F>
std::vector<typename F::value_type> lift_selector(const F& f,
                                                  const std::vector<std::uint8_t>& r) {
  std::vector<typename F::value_type> out(r.size());
  for (std::size_t k = 0; k < r.size(); ++k) out[k] = r[k] ? f.one() : f.zero();
  return out;
}

// u = X(Yr), v = Zr.
template <ScalarBackend F>
void products(const F& f, const Matrix<typename F::value_type>& x,
              const Matrix<typename F::value_type>& y,
              const Matrix<typename F::value_type>& z,
              VerificationRound<typename F::value_type>& round,
              OpCounter* counter) {
  const auto r = lift_selector(f, round.r);
  const auto yr = mat_vec(f, y, std::span<const typename F::value_type>(r), counter);
  round.u = mat_vec(f, x, std::span<const typename F::value_type>(yr), counter);
  round.v = mat_vec(f, z, std::span<const typename F::value_type>(r), counter);
  round.vacuous = std::ranges::none_of(round.r, [](std::uint8_t b) { return b != 0; });
}

}  // namespace detail

/// One round of the exact check X(Yr) - Zr == 0 with a caller-chosen r.
template <ScalarBackend F>
VerificationRound<typename F::value_type> freivalds_round(
    const F& f, const Matrix<typename F::value_type>& x,
    const Matrix<typename F::value_type>& y,
    const Matrix<typename F::value_type>& z, std::vector<std::uint8_t> r,
    OpCounter* counter = nullptr) {
  detail::check_product_shapes<F>(x, y, z);
  if (r.size() != y.cols()) throw ShapeError("selector length must equal s");
  VerificationRound<typename F::value_type> round;
  round.r = std::move(r);
  detail::products(f, x, y, z, round, counter);
  round.deviation.resize(round.u.size());
  round.passed = true;
  for (std::size_t i = 0; i < round.u.size(); ++i) {
    round.deviation[i] = f.distance(round.u[i], round.v[i]);
    round.max_deviation = std::max(round.max_deviation, round.deviation[i]);
    if (round.deviation[i] != 0.0) round.passed = false;
  }
  if (counter != nullptr) OpCounter::bump(counter->compares, round.u.size());
  return round;
}

/// l rounds of the exact Freivalds check; round k draws r from rng.split(k).
template <ScalarBackend F>
VerificationReport<typename F::value_type> freivalds_exact(
    const F& f, const Matrix<typename F::value_type>& x,
    const Matrix<typename F::value_type>& y,
    const Matrix<typename F::value_type>& z, const VerificationPolicy& policy,
    const CounterRng& rng, OpCounter* counter = nullptr) {
  policy.validate();
  if (policy.mode != VerifyMode::kExact) {
    throw ModeError("freivalds_exact requires an exact-mode policy");
  }
  detail::check_product_shapes<F>(x, y, z);
  VerificationReport<typename F::value_type> report;
  report.mode = VerifyMode::kExact;
  report.rounds = policy.rounds;
  report.lambda = policy.lambda;
  report.threshold = 0.0;
  report.accepted = true;
  for (std::size_t k = 0; k < policy.rounds; ++k) {
    CounterRng round_rng = rng.split(k);
    auto round = freivalds_round(f, x, y, z, random_selector(y.cols(), round_rng),
                                 counter);
    report.accepted = report.accepted && round.passed;
    report.round_data.push_back(std::move(round));
  }
  return report;
}

/// Per-row estimate xbar_i * ybar_i * n * s * eps of the residual
/// X(Yr) - Zr, with xbar_i the mean of row i of X and ybar_i the mean of
/// column i of Y. When m > s the column index wraps: ((i - 1) mod s) + 1.
std::vector<double> rounding_error_estimate(const Matrix<double>& x,
                                            const Matrix<double>& y,
                                            const FloatModel& model);

/// One tolerance round with a caller-chosen r: accept iff every row has
/// |v_i / u_i - 1| <= lambda * n * s * eps.
VerificationRound<double> tolerance_round(const Matrix<double>& x,
                                          const Matrix<double>& y,
                                          const Matrix<double>& z,
                                          std::vector<std::uint8_t> r,
                                          double lambda, const FloatModel& model,
                                          OpCounter* counter = nullptr);

VerificationReport<double> tolerance_check(const Matrix<double>& x,
                                           const Matrix<double>& y,
                                           const Matrix<double>& z,
                                           const VerificationPolicy& policy,
                                           const FloatModel& model,
                                           const CounterRng& rng,
                                           OpCounter* counter = nullptr);

/// Dispatches on policy.mode. Tolerance mode is only defined for the real
/// backend.
template <ScalarBackend F>
VerificationReport<typename F::value_type> verify(
    const F& f, const Matrix<typename F::value_type>& x,
    const Matrix<typename F::value_type>& y,
    const Matrix<typename F::value_type>& z, const VerificationPolicy& policy,
    const FloatModel& model, const CounterRng& rng,
    OpCounter* counter = nullptr) {
  if (policy.mode == VerifyMode::kExact) {
    return freivalds_exact(f, x, y, z, policy, rng, counter);
  }
  if constexpr (std::is_same_v<typename F::value_type, double>) {
    return tolerance_check(x, y, z, policy, model, rng, counter);
  } else {
    throw ModeError("tolerance verification is only defined in float mode");
  }
}

}  // namespace outmat

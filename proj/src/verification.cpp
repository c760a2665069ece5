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

#include "outmat/verification.hpp"

#include <limits>
#include <string>

namespace outmat {

std::string_view to_string(VerifyMode mode) {
  return mode == VerifyMode::kExact ? "exact" : "tolerance";
}

VerifyMode parse_verify_mode(std::string_view text) {
  if (text == "exact") return VerifyMode::kExact;
  if (text == "tolerance") return VerifyMode::kTolerance;
  throw ConfigError("unknown verification mode '" + std::string(text) + "'");
}

void VerificationPolicy::validate() const {
  if (rounds == 0) throw ConfigError("verification rounds must be >= 1");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
}

std::vector<std::uint8_t> random_selector(std::size_t s, CounterRng& rng) {
  std::vector<std::uint8_t> r(s);
  for (auto& bit : r) bit = rng.fair_bit() ? 1 : 0;
  return r;
}

namespace {

// Row means xbar_i and column means ybar_i (column index wrapped mod s).
std::vector<double> mean_products(const Matrix<double>& x, const Matrix<double>& y) {
  const std::size_t m = x.rows(), n = x.cols(), s = y.cols();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    double xsum = 0.0;
    for (std::size_t k = 0; k < n; ++k) xsum += x.at0(i, k);
    const std::size_t col = i % s;
    double ysum = 0.0;
    for (std::size_t k = 0; k < n; ++k) ysum += y.at0(k, col);
    out[i] = (xsum / static_cast<double>(n)) * (ysum / static_cast<double>(n));
  }
  return out;
}

}  // namespace

std::vector<double> rounding_error_estimate(const Matrix<double>& x,
                                            const Matrix<double>& y,
                                            const FloatModel& model) {
  if (x.cols() != y.rows()) {
    throw ShapeError("rounding_error_estimate: X is " + std::to_string(x.rows()) +
                     "x" + std::to_string(x.cols()) + ", Y has " +
                     std::to_string(y.rows()) + " rows");
  }
  const double scale = static_cast<double>(x.cols()) *
                       static_cast<double>(y.cols()) * model.epsilon();
  std::vector<double> est = mean_products(x, y);
  for (double& e : est) e *= scale;
  return est;
}

VerificationRound<double> tolerance_round(const Matrix<double>& x,
                                          const Matrix<double>& y,
                                          const Matrix<double>& z,
                                          std::vector<std::uint8_t> r,
                                          double lambda, const FloatModel& model,
                                          OpCounter* counter) {
  const RealField f;
  detail::check_product_shapes<RealField>(x, y, z);
  if (r.size() != y.cols()) throw ShapeError("selector length must equal s");
  const double threshold = lambda * static_cast<double>(x.cols()) *
                           static_cast<double>(y.cols()) * model.epsilon();
  VerificationRound<double> round;
  round.r = std::move(r);
  detail::products(f, x, y, z, round, counter);
  round.deviation.resize(round.u.size());
  std::vector<double> scales;
  round.passed = true;
  for (std::size_t i = 0; i < round.u.size(); ++i) {
    const double u = round.u[i], v = round.v[i];
    double dev;
    if (u != 0.0) {
      dev = std::fabs(v / u - 1.0);
    } else if (v == 0.0) {
      dev = 0.0;
    } else {
      if (scales.empty()) scales = mean_products(x, y);
      const double scale = std::fabs(scales[i]);
      dev = scale > 0.0 ? std::fabs(v) / scale
                        : std::numeric_limits<double>::infinity();
    }
    round.deviation[i] = dev;
    round.max_deviation = std::max(round.max_deviation, dev);
    if (!(dev <= threshold)) round.passed = false;
  }
  if (counter != nullptr) OpCounter::bump(counter->compares, round.u.size());
  return round;
}

VerificationReport<double> tolerance_check(const Matrix<double>& x,
                                           const Matrix<double>& y,
                                           const Matrix<double>& z,
                                           const VerificationPolicy& policy,
                                           const FloatModel& model,
                                           const CounterRng& rng,
                                           OpCounter* counter) {
  policy.validate();
  if (policy.mode != VerifyMode::kTolerance) {
    throw ModeError("tolerance_check requires a tolerance-mode policy");
  }
  detail::check_product_shapes<RealField>(x, y, z);
  VerificationReport<double> report;
  report.mode = VerifyMode::kTolerance;
  report.rounds = policy.rounds;
  report.lambda = policy.lambda;
  report.threshold = policy.lambda * static_cast<double>(x.cols()) *
                     static_cast<double>(y.cols()) * model.epsilon();
  report.accepted = true;
  for (std::size_t k = 0; k < policy.rounds; ++k) {
    CounterRng round_rng = rng.split(k);
    auto round = tolerance_round(x, y, z, random_selector(y.cols(), round_rng),
                                 policy.lambda, model, counter);
    report.accepted = report.accepted && round.passed;
    report.round_data.push_back(std::move(round));
  }
  return report;
}

}  // namespace outmat

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
#include <cstdint>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include "outmat/adversary.hpp"
#include "outmat/parallel.hpp"
#include "outmat/scheme.hpp"
#include "outmat/verification.hpp"

namespace outmat {

/// One row of X(Yr) - Zr for one trial.
struct ResidualRow {
  std::size_t trial = 0;
  std::size_t row = 0;      // 1-based
  double actual = 0.0;      // |u_i - v_i|
  double relative = 0.0;    // |v_i / u_i - 1|
  double estimate = 0.0;    // xbar_i ybar_i n s eps (0 in field mode)
  double ratio = 0.0;       // actual / |estimate|, 0 when actual == 0
};

struct ResidualConfig {
  Dims dims{64, 64, 64};
  std::size_t trials = 100;
  KeySpan key_span;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
  double lambda = 8.0;  // only for the over-tolerance count
};

struct ResidualProfile {
  Dims dims;
  KeySpan key_span;
  std::size_t trials = 0;
  double tolerance = 0.0;  // lambda * n * s * eps
  std::vector<ResidualRow> rows;

  std::size_t nonzero_trials = 0;
  std::size_t rows_over_tolerance = 0;
  double median_actual = 0.0;
  double median_relative = 0.0;
  double median_ratio = 0.0;
  double max_ratio = 0.0;

  double nonzero_trial_fraction() const {
    return trials == 0 ? 0.0 : static_cast<double>(nonzero_trials) / trials;
  }
  double over_tolerance_fraction() const {
    return rows.empty() ? 0.0
                        : static_cast<double>(rows_over_tolerance) / rows.size();
  }
};

/// Per-row residuals of one verification instance with selector r.
template <ScalarBackend F>
std::vector<ResidualRow> row_residuals(const F& f,
                                       const Matrix<typename F::value_type>& x,
                                       const Matrix<typename F::value_type>& y,
                                       const Matrix<typename F::value_type>& z,
                                       const std::vector<std::uint8_t>& r,
                                       const FloatModel& model,
                                       std::size_t trial = 0) {
  const auto round = freivalds_round(f, x, y, z, r);
  std::vector<double> estimate(x.rows(), 0.0);
  if constexpr (std::is_same_v<typename F::value_type, double>) {
    estimate = rounding_error_estimate(x, y, model);
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<ResidualRow> rows(x.rows());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ResidualRow& row = rows[i];
    row.trial = trial;
    row.row = i + 1;
    row.actual = round.deviation[i];
    row.estimate = estimate[i];
    if constexpr (std::is_same_v<typename F::value_type, double>) {
      const double u = round.u[i], v = round.v[i];
      row.relative = u != 0.0 ? std::fabs(v / u - 1.0) : (v == 0.0 ? 0.0 : kInf);
    } else {
      row.relative = row.actual == 0.0 ? 0.0 : kInf;
    }
    if (row.actual == 0.0) {
      row.ratio = 0.0;
    } else {
      row.ratio = row.estimate != 0.0 ? row.actual / std::fabs(row.estimate) : kInf;
    }
  }
  return rows;
}

double median(std::vector<double> values);

// Fills the aggregate fields of `profile` from profile.rows.
void summarize(ResidualProfile& profile);

/// Honest pipeline per trial (key split(0), inputs split(1), one selector
/// from split(3).split(0)), recording every row's residual against the
/// analytic estimate.
template <ScalarBackend F>
ResidualProfile residual_profile(const F& f, const ResidualConfig& cfg,
                                 const FloatModel& model) {
  if (cfg.trials == 0) throw ConfigError("residual profile needs trials >= 1");
  auto per_trial = run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
    const CounterRng stream = trial_stream(cfg.master_seed, t);
    CounterRng key_rng = stream.split(0);
    CounterRng input_rng = stream.split(1);
    CounterRng r_rng = stream.split(3).split(0);
    const auto key = keygen(f, cfg.dims, key_rng, cfg.key_span);
    const auto x = random_matrix(f, cfg.dims.m, cfg.dims.n, input_rng);
    const auto y = random_matrix(f, cfg.dims.n, cfg.dims.s, input_rng);
    const auto disguised = transform(f, x, y, key);
    const auto z = compose(f, matmul(f, disguised.x, disguised.y), key);
    return row_residuals(f, x, y, z, random_selector(cfg.dims.s, r_rng), model, t);
  });
  ResidualProfile profile;
  profile.dims = cfg.dims;
  profile.key_span = cfg.key_span;
  profile.trials = cfg.trials;
  profile.tolerance = cfg.lambda * static_cast<double>(cfg.dims.n) *
                      static_cast<double>(cfg.dims.s) * model.epsilon();
  for (auto& rows : per_trial) {
    profile.rows.insert(profile.rows.end(), rows.begin(), rows.end());
  }
  summarize(profile);
  return profile;
}

inline constexpr const char* kResidualCsvHeader =
    "trial,row,actual,relative,estimate,ratio";

std::string residual_csv_rows(const ResidualProfile& profile);

}  // namespace outmat

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
#include <string_view>
#include <type_traits>
#include <vector>

#include "outmat/errors.hpp"
#include "outmat/matrix.hpp"
#include "outmat/parallel.hpp"
#include "outmat/scalar.hpp"
#include "outmat/scheme.hpp"
#include "outmat/verification.hpp"

namespace outmat {

enum class BehaviorKind { kHonest, kRandomForge, kRhoPerturb, kRhoPerturbRelative };

// "honest", "random-forge", "rho", "rho-relative".
std::string_view to_string(BehaviorKind kind);
BehaviorKind parse_behavior(std::string_view text);

struct ServerBehavior {
  BehaviorKind kind = BehaviorKind::kHonest;
  // 1-based cell of Z' perturbed by the rho attacks.
  std::size_t target_row = 1;
  std::size_t target_col = 1;

  friend bool operator==(const ServerBehavior&, const ServerBehavior&) = default;
};

/// What the server did to Z'. `noop` is set when a forgery left the cell's
/// bit pattern unchanged, e.g. a literal rho added to |Z'(1,1)| >= 4.
struct ServeTrace {
  BehaviorKind kind = BehaviorKind::kHonest;
  bool forged = false;
  std::size_t row = 0;
  std::size_t col = 0;
  double original_magnitude = 0.0;  // |Z'(row, col)| before forging, float only
  double perturbation = 0.0;        // rho attacks only
  bool noop = false;
};

template <class T>
struct Served {
  Matrix<T> zp;
  ServeTrace trace;
};

/// Additive perturbation used by the rho attacks. Literal: rho. Relative:
/// rho * 2^floor(log2 |value|), one ulp of value's binade; rho for value 0.
double rho_perturbation(double value, BehaviorKind kind, const FloatModel& model);

/// Applies `behavior` to an honestly computed Z'.
template <ScalarBackend F>
Served<typename F::value_type> forge(const F& f, Matrix<typename F::value_type> zp,
                                     const ServerBehavior& behavior,
                                     const FloatModel& model, CounterRng& rng) {
  Served<typename F::value_type> out{std::move(zp), ServeTrace{}};
  ServeTrace& trace = out.trace;
  trace.kind = behavior.kind;
  switch (behavior.kind) {
    case BehaviorKind::kHonest:
      return out;
    case BehaviorKind::kRandomForge: {
      trace.forged = true;
      trace.row = 1 + rng.uniform_below(out.zp.rows());
      trace.col = 1 + rng.uniform_below(out.zp.cols());
      auto& cell = out.zp(trace.row, trace.col);
      const auto before = cell;
      if constexpr (F::kExact) {
        cell = f.random_entry(rng);
      } else {
        trace.original_magnitude = std::fabs(cell);
        cell = f.random_key(rng, KeySpan{1.0, 1e6});
      }
      trace.noop = f.same(before, cell);
      return out;
    }
    case BehaviorKind::kRhoPerturb:
    case BehaviorKind::kRhoPerturbRelative: {
      if constexpr (F::kExact) {
        throw ModeError("rho-perturbation attacks are only defined in float mode");
      } else {
        if (behavior.target_row < 1 || behavior.target_row > out.zp.rows() ||
            behavior.target_col < 1 || behavior.target_col > out.zp.cols()) {
          throw ShapeError("attack target cell outside Z'");
        }
        trace.forged = true;
        trace.row = behavior.target_row;
        trace.col = behavior.target_col;
        double& cell = out.zp(trace.row, trace.col);
        const double before = cell;
        trace.original_magnitude = std::fabs(before);
        trace.perturbation = rho_perturbation(before, behavior.kind, model);
        cell = before + trace.perturbation;
        trace.noop = f.same(before, cell);
        return out;
      }
    }
  }
  throw ConfigError("unknown server behavior");
}

/// The server's reply to (X', Y'): Z' = X'Y' followed by `behavior`.
template <ScalarBackend F>
Served<typename F::value_type> serve(const F& f,
                                     const Matrix<typename F::value_type>& xp,
                                     const Matrix<typename F::value_type>& yp,
                                     const ServerBehavior& behavior,
                                     const FloatModel& model, CounterRng& rng,
                                     OpCounter* counter = nullptr) {
  return forge(f, matmul(f, xp, yp, counter), behavior, model, rng);
}

struct AttackConfig {
  Dims dims{64, 64, 64};
  std::size_t trials = 1000;
  VerificationPolicy policy{5, 8.0, VerifyMode::kTolerance};
  ServerBehavior behavior;
  KeySpan key_span;
  std::uint64_t master_seed = 1;
  unsigned threads = 1;
};

struct AttackTrial {
  bool accepted = false;         // forged Z passed the configured check
  bool honest_accepted = false;  // honest Z passed with the same r vectors
  bool differs = false;          // forged Z != honest Z bit-exactly
  bool noop = false;
  bool target_at_least_4 = false;  // |Z'(target)| >= 4, float only
  double honest_max_deviation = 0.0;
  double forged_max_deviation = 0.0;
  // Rounds whose r selects the forged column of Z, and how many of those the
  // exact check rejects on the forged Z.
  std::size_t exact_selected_rounds = 0;
  std::size_t exact_selected_rejected = 0;
};

struct AttackStats {
  std::size_t trials = 0;
  std::size_t accepted = 0;
  std::size_t honest_accepted = 0;
  std::size_t differs = 0;
  std::size_t wrong_accepted = 0;  // accepted and differs
  std::size_t noops = 0;
  std::size_t target_at_least_4 = 0;
  std::size_t noops_target_at_least_4 = 0;
  std::size_t exact_selected_rounds = 0;
  std::size_t exact_selected_rejected = 0;

  double acceptance_frequency() const { return ratio(accepted, trials); }
  double honest_acceptance_frequency() const { return ratio(honest_accepted, trials); }
  double differs_frequency() const { return ratio(differs, trials); }
  // Among trials whose forged Z differs from the honest Z.
  double wrong_accepted_frequency() const { return ratio(wrong_accepted, differs); }
  double noop_frequency() const { return ratio(noops, trials); }
  double noop_frequency_target_at_least_4() const {
    return ratio(noops_target_at_least_4, target_at_least_4);
  }

  static double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  }

  friend bool operator==(const AttackStats&, const AttackStats&) = default;
};

AttackStats aggregate(const std::vector<AttackTrial>& trials);

/// Stream for one trial; phases are split(0) key, split(1) inputs,
/// split(2) server, split(3) verification.
inline CounterRng trial_stream(std::uint64_t master_seed, std::size_t trial) {
  return CounterRng(master_seed).split(trial);
}

/// One full pipeline run with a possibly malicious server.
template <ScalarBackend F>
AttackTrial attack_trial(const F& f, const AttackConfig& cfg,
                         const FloatModel& model, std::size_t index) {
  const CounterRng stream = trial_stream(cfg.master_seed, index);
  CounterRng key_rng = stream.split(0);
  CounterRng input_rng = stream.split(1);
  CounterRng server_rng = stream.split(2);
  const CounterRng verify_rng = stream.split(3);

  const auto key = keygen(f, cfg.dims, key_rng, cfg.key_span);
  const auto x = random_matrix(f, cfg.dims.m, cfg.dims.n, input_rng);
  const auto y = random_matrix(f, cfg.dims.n, cfg.dims.s, input_rng);
  const auto disguised = transform(f, x, y, key);
  auto honest_zp = matmul(f, disguised.x, disguised.y);
  const auto honest_z = compose(f, honest_zp, key);
  const auto served = forge(f, std::move(honest_zp), cfg.behavior, model, server_rng);
  const auto forged_z = compose(f, served.zp, key);

  AttackTrial out;
  out.noop = served.trace.noop;
  out.target_at_least_4 =
      !F::kExact && served.trace.forged && served.trace.original_magnitude >= 4.0;
  out.differs = !same_matrix(f, honest_z, forged_z);

  const auto forged_report = verify(f, x, y, forged_z, cfg.policy, model, verify_rng);
  const auto honest_report = verify(f, x, y, honest_z, cfg.policy, model, verify_rng);
  out.accepted = forged_report.accepted;
  out.honest_accepted = honest_report.accepted;
  out.forged_max_deviation = forged_report.max_deviation();
  out.honest_max_deviation = honest_report.max_deviation();

  if (served.trace.forged && out.differs) {
    const std::size_t forged_col = key.pi3(served.trace.col);
    for (const auto& round : forged_report.round_data) {
      if (round.r[forged_col - 1] == 0) continue;
      ++out.exact_selected_rounds;
      if (!freivalds_round(f, x, y, forged_z, round.r).passed) {
        ++out.exact_selected_rejected;
      }
    }
  }
  return out;
}

template <ScalarBackend F>
std::vector<AttackTrial> attack_trials(const F& f, const AttackConfig& cfg,
                                       const FloatModel& model) {
  if (cfg.trials == 0) throw ConfigError("attack experiment needs trials >= 1");
  cfg.policy.validate();
  return run_trials(cfg.trials, cfg.threads, [&](std::size_t i) {
    return attack_trial(f, cfg, model, i);
  });
}

template <ScalarBackend F>
AttackStats attack_experiment(const F& f, const AttackConfig& cfg,
                              const FloatModel& model) {
  return aggregate(attack_trials(f, cfg, model));
}

}  // namespace outmat

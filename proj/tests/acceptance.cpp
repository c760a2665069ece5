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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "outmat/analysis.hpp"
#include "outmat/cost.hpp"
#include "outmat/harness.hpp"
#include "outmat/protocol.hpp"
#include "oracles.hpp"

namespace outmat {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const FloatModel kModel = FloatModel::binary64();

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o) {
  std::printf("%s criterion %d: %s (%s)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

template <ScalarBackend F>
auto honest_z(const F& f, Dims d, const CounterRng& stream) {
  CounterRng key_rng = stream.split(0), input_rng = stream.split(1);
  const auto key = keygen(f, d, key_rng);
  auto x = random_matrix(f, d.m, d.n, input_rng);
  auto y = random_matrix(f, d.n, d.s, input_rng);
  const auto dis = transform(f, x, y, key);
  auto z = compose(f, matmul(f, dis.x, dis.y), key);
  struct Out {
    Matrix<typename F::value_type> x, y, z;
  };
  return Out{std::move(x), std::move(y), std::move(z)};
}

Outcome field_correctness() {
  const auto start = Clock::now();
  const PrimeField f;
  CounterRng rng(20260101);
  std::size_t ok = 0;
  const std::size_t cases = 500;
  for (std::size_t t = 0; t < cases; ++t) {
    const Dims d{1 + rng.uniform_below(16), 1 + rng.uniform_below(16),
                 1 + rng.uniform_below(16)};
    const auto key = keygen(f, d, rng);
    const auto x = random_matrix(f, d.m, d.n, rng);
    const auto y = random_matrix(f, d.n, d.s, rng);
    const auto dis = transform(f, x, y, key);
    const auto z = compose(f, matmul(f, dis.x, dis.y), key);
    const auto direct = matmul(f, x, y);
    if (z == direct && testing::oracle_correctness(f, x, y, key) == direct) ++ok;
  }
  const double secs = seconds_since(start);
  return {ok == cases && secs < 10.0, fmt("%zu/%zu exact, %.2f s < 10 s", ok, cases, secs)};
}

Outcome exact_check_fails_on_floats() {
  const auto start = Clock::now();
  const Dims d{64, 64, 64};
  const std::size_t trials = 200;
  const VerificationPolicy policy{1, 8.0, VerifyMode::kExact};
  std::size_t float_rejected = 0, field_rejected = 0;
  const RealField r;
  const PrimeField f;
  for (std::size_t t = 0; t < trials; ++t) {
    const CounterRng stream = trial_stream(500, t);
    const auto a = honest_z(r, d, stream);
    if (!freivalds_exact(r, a.x, a.y, a.z, policy, stream.split(3)).accepted) {
      ++float_rejected;
    }
    const auto b = honest_z(f, d, stream);
    if (!freivalds_exact(f, b.x, b.y, b.z, policy, stream.split(3)).accepted) {
      ++field_rejected;
    }
  }
  const double secs = seconds_since(start);
  const double rate = static_cast<double>(float_rejected) / trials;
  return {rate >= 0.95 && field_rejected == 0 && secs < 30.0,
          fmt("float rejected %zu/%zu = %.3f >= 0.95, field rejected %zu, %.2f s < 30 s",
              float_rejected, trials, rate, field_rejected, secs)};
}

Outcome freivalds_soundness() {
  const PrimeField f(2147483647);
  CounterRng rng(31);
  bool enumeration_ok = true;
  std::size_t cases = 0;
  for (std::size_t s = 1; s <= 4; ++s) {
    for (std::size_t j = 1; j <= s; ++j) {
      const std::size_t m = 3, n = 3;
      const auto x = random_matrix(f, m, n, rng);
      const auto y = random_matrix(f, n, s, rng);
      auto z = matmul(f, x, y);
      z(2, j) = f.add(z(2, j), f.from_int(1 + static_cast<std::int64_t>(rng.uniform_below(1000))));
      std::size_t detected = 0, brute = 0;
      const auto selectors = testing::all_selectors(s);
      for (const auto& sel : selectors) {
        const auto round = freivalds_round(f, x, y, z, sel);
        if (!round.passed) ++detected;
        if (sel[j - 1] == 1) ++brute;
      }
      enumeration_ok = enumeration_ok && detected == brute && 2 * brute == selectors.size();
      ++cases;
    }
  }
  AttackConfig cfg;
  cfg.dims = {32, 32, 32};
  cfg.trials = 1000;
  cfg.policy = {5, 8.0, VerifyMode::kExact};
  cfg.behavior = {BehaviorKind::kRandomForge};
  cfg.master_seed = 303;
  const auto stats = attack_experiment(f, cfg, kModel);
  const double wrong = stats.wrong_accepted_frequency();
  return {enumeration_ok && wrong <= 0.05 && stats.differs > 0,
          fmt("enumeration matches brute force on %zu cases; l=5 wrong accepted "
              "%zu/%zu = %.4f <= 0.05",
              cases, stats.wrong_accepted, stats.differs, wrong)};
}

Outcome tolerance_check_behavior() {
  const RealField r;
  const Dims d{64, 64, 64};
  const std::size_t trials = 1000;
  const VerificationPolicy policy{1, 8.0, VerifyMode::kTolerance};
  const std::vector<double> lambdas{0.0, 0.001, 0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 64.0};
  std::size_t accepted = 0, monotone_violations = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const CounterRng stream = trial_stream(404, t);
    const auto a = honest_z(r, d, stream);
    const auto rep = verify(r, a.x, a.y, a.z, policy, kModel, stream.split(3));
    if (rep.accepted) ++accepted;
    if (rep.recompute_accepted() != rep.accepted) ++monotone_violations;
    bool previous = false;
    for (double lambda : lambdas) {
      const bool now = rep.accepted_at(lambda * 64.0 * 64.0 * kModel.epsilon());
      if (previous && !now) ++monotone_violations;
      previous = now;
    }
  }
  const double rate = static_cast<double>(accepted) / trials;
  return {rate >= 0.99 && monotone_violations == 0,
          fmt("honest accepted %zu/%zu = %.3f >= 0.99, monotonicity violations %zu", accepted,
              trials, rate, monotone_violations)};
}

Outcome attack_reproduction() {
  const RealField r;
  AttackConfig cfg;
  cfg.dims = {64, 64, 64};
  cfg.trials = 1000;
  cfg.policy = {5, 8.0, VerifyMode::kTolerance};
  cfg.behavior = {BehaviorKind::kRhoPerturbRelative};
  cfg.master_seed = 505;
  const auto rel = attack_experiment(r, cfg, kModel);
  cfg.behavior = {BehaviorKind::kRhoPerturb};
  const auto lit = attack_experiment(r, cfg, kModel);
  const double wrong = rel.wrong_accepted_frequency();
  const double noop4 = lit.noop_frequency_target_at_least_4();
  return {wrong >= 0.99 && rel.differs > 0 && lit.target_at_least_4 > 0 && noop4 == 1.0,
          fmt("relative: differing forgeries accepted %zu/%zu = %.3f >= 0.99; literal: no-op "
              "rate %.3f overall, %zu/%zu = %.3f where |Z'(1,1)| >= 4",
              rel.wrong_accepted, rel.differs, wrong, lit.noop_frequency(),
              lit.noops_target_at_least_4, lit.target_at_least_4, noop4)};
}

Outcome cost_model() {
  const RealField r;
  const PrimeField f;
  CounterRng rng(606);
  std::size_t matches = 0;
  for (int t = 0; t < 50; ++t) {
    const Dims d{1 + rng.uniform_below(32), 1 + rng.uniform_below(32),
                 1 + rng.uniform_below(32)};
    const std::size_t l = 1 + rng.uniform_below(4);
    const CounterRng stream = rng.split(t);
    auto traced = [&](const auto& backend, VerifyMode mode) {
      CounterRng k = stream.split(0), in = stream.split(1);
      const auto key = keygen(backend, d, k);
      const auto x = random_matrix(backend, d.m, d.n, in);
      const auto y = random_matrix(backend, d.n, d.s, in);
      return run_protocol(backend, x, y, key, {l, 8.0, mode}, kModel, stream).trace;
    };
    const auto trace = t % 2 ? traced(r, VerifyMode::kTolerance) : traced(f, VerifyMode::kExact);
    if (counted_costs(trace, 1.0) == analytic_costs(d, l, 8, 1.0)) ++matches;
  }
  bool increasing = true;
  for (double overhead : {0.0, 1.0, 10.0}) {
    double previous = -1.0;
    for (std::size_t n : {1u, 10u, 100u, 1000u, 10000u}) {
      const double g = analytic_costs({64, n, 64}, 2, 8, overhead).gain_ratio;
      increasing = increasing && g > previous;
      previous = g;
    }
  }
  const auto big = analytic_costs({256, 256, 256}, 2, 8, 0.0);
  const double share =
      static_cast<double>(big.client_flops) / static_cast<double>(big.server_flops);
  return {matches == 50 && increasing && share <= 0.05,
          fmt("counted == analytic on %d/50 shapes, gain strictly increasing in n: %s, "
              "client/server at 256 = %.4f <= 0.05",
              static_cast<int>(matches), increasing ? "yes" : "no", share)};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "outmat_acceptance") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text = {}) const {
    const fs::path p = path / name;
    if (!text.empty()) std::ofstream(p) << text;
    return p.string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  return cli_run(args, out, err);
}

Outcome determinism() {
  const TempDir tmp;
  const std::string fx = tmp.file("fx.txt", "2 2\n1 2\n3 4\n");
  const std::string fy = tmp.file("fy.txt", "2 2\n5 6\n0 1\n");
  const std::string fz = tmp.file("fz.txt", "2 2\n5 1\n1 1\n");
  const std::string rx = tmp.file("rx.txt", "1 2\n0.1 0.2\n");
  const std::string ry = tmp.file("ry.txt", "2 1\n0.3\n0.4\n");
  const std::string rz = tmp.file("rz.txt", "1 1\n0.11\n");
  const std::vector<std::vector<std::string>> runs{
      {"demo", "--mode", "field", "--m", "4", "--n", "3", "--s", "5", "--seed", "7"},
      {"demo", "--mode", "float", "--behavior", "rho-relative", "--l", "3"},
      {"verify-exact", "--mode", "field", "--modulus", "7", "--x", fx, "--y", fy, "--z", fz},
      {"verify-tolerance", "--x", rx, "--y", ry, "--z", rz, "--l", "4"},
      {"attack", "--behavior", "rho", "--m", "16", "--n", "16", "--s", "16", "--trials", "60"},
      {"attack", "--mode", "field", "--behavior", "random-forge", "--trials", "60", "--format",
       "csv"},
      {"residuals", "--m", "12", "--n", "12", "--s", "12", "--trials", "20"},
      {"residuals", "--mode", "field", "--trials", "10", "--format", "json"},
      {"costs", "--m", "9", "--n", "4", "--s", "6", "--l", "2", "--overhead", "3"},
      {"sweep", "--dims", "8,64,128", "--overheads", "0,10"},
  };
  std::size_t identical = 0, parallel_ok = 0, parallel_checked = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const std::string first = tmp.file("run" + std::to_string(k));
    const std::string again = tmp.file("replay" + std::to_string(k));
    auto args = runs[k];
    args.insert(args.end(), {"--out", first});
    const int code = cli(args);
    const int replay_code = cli({"replay", "--config", first, "--out", again, "--threads", "4"});
    if (code != 2 && code == replay_code && slurp(first) == slurp(again) &&
        !slurp(first).empty()) {
      ++identical;
    }
    if (runs[k][0] == "attack" || runs[k][0] == "residuals") {
      ++parallel_checked;
      const std::string par = tmp.file("par" + std::to_string(k));
      auto pargs = runs[k];
      pargs.insert(pargs.end(), {"--threads", "3", "--out", par});
      if (cli(pargs) == code && slurp(par) == slurp(first)) ++parallel_ok;
    }
  }
  return {identical == runs.size() && parallel_ok == parallel_checked,
          fmt("replay byte-identical %zu/%zu, parallel == serial %zu/%zu", identical,
              runs.size(), parallel_ok, parallel_checked)};
}

}  // namespace
}  // namespace outmat

int main() {
  using namespace outmat;
  try {
    report(1, "finite-field round trip equals product and matrix oracle", field_correctness());
    report(2, "exact check rejects honest float results", exact_check_fails_on_floats());
    report(3, "randomized check soundness", freivalds_soundness());
    report(4, "tolerance check accepts honest results", tolerance_check_behavior());
    report(5, "perturbation attack passes the tolerance check", attack_reproduction());
    report(6, "cost model", cost_model());
    report(7, "determinism", determinism());
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance suite aborted: %s\n", e.what());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}

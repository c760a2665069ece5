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

#include "outmat/harness.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "outmat/adversary.hpp"
#include "outmat/analysis.hpp"
#include "outmat/cost.hpp"
#include "outmat/errors.hpp"
#include "outmat/io.hpp"
#include "outmat/protocol.hpp"

namespace outmat {

namespace {

constexpr const char* kTool = "outmat";
constexpr const char* kOutputDirEnv = "OUTMAT_OUTPUT_DIR";
constexpr const char* kConfigPrefix = "# config: ";

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> commands{
      "demo", "verify-exact", "verify-tolerance", "attack",
      "residuals", "costs", "sweep"};
  return commands;
}

bool is_one_of(const std::string& v, std::initializer_list<const char*> options) {
  for (const char* o : options) {
    if (v == o) return true;
  }
  return false;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir) {
      return std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void write_file(const std::string& path, const std::string& text) {
  const auto target = resolve_output(path);
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path());
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + target.string() + "'");
  out << text;
}

KeySpan parse_key_span(const std::string& text) {
  const RealField real;
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    const double v = real.parse(text);
    return {v, v};
  }
  return {real.parse(text.substr(0, comma)), real.parse(text.substr(comma + 1))};
}

std::string config_line(const ExperimentConfig& cfg) {
  return std::string(kConfigPrefix) + config_to_json(cfg).dump() + "\n";
}

std::string json_artifact(const ExperimentConfig& cfg, json result) {
  json doc{{"config", config_to_json(cfg)}, {"result", std::move(result)}};
  return doc.dump(2) + "\n";
}

template <class Fn>
auto with_backend(const ExperimentConfig& cfg, Fn&& fn) {
  if (cfg.mode == "field") return fn(PrimeField(cfg.modulus));
  return fn(RealField{});
}

VerificationPolicy policy_for(const ExperimentConfig& cfg, const std::string& check) {
  return {cfg.rounds, cfg.lambda, parse_verify_mode(check)};
}

ServerBehavior behavior_for(const ExperimentConfig& cfg) {
  return {parse_behavior(cfg.behavior), cfg.target_row, cfg.target_col};
}

template <ScalarBackend F>
std::string demo(const F& f, const ExperimentConfig& cfg) {
  const FloatModel model = cfg.float_model();
  const CounterRng stream = trial_stream(cfg.seed, 0);
  CounterRng key_rng = stream.split(0);
  CounterRng input_rng = stream.split(1);
  const auto key = keygen(f, cfg.dims, key_rng, cfg.key_span);
  const auto x = random_matrix(f, cfg.dims.m, cfg.dims.n, input_rng);
  const auto y = random_matrix(f, cfg.dims.n, cfg.dims.s, input_rng);
  const auto run = run_protocol(f, x, y, key, policy_for(cfg, cfg.effective_check()),
                                model, stream, behavior_for(cfg));
  const auto xy = matmul(f, x, y);

  std::ostringstream out;
  out << config_line(cfg);
  out << "mode: " << F::kName;
  if constexpr (F::kExact) out << " (q = " << f.modulus() << ")";
  out << "\n\nX:\n" << matrix_to_text(f, x);
  out << "\nY:\n" << matrix_to_text(f, y);
  out << "\nkey:\n" << key_to_json(f, key).dump(2) << "\n";
  out << "\nX':\n" << matrix_to_text(f, run.xp);
  out << "\nY':\n" << matrix_to_text(f, run.yp);
  out << "\nZ':\n" << matrix_to_text(f, run.zp);
  out << "\nZ:\n" << matrix_to_text(f, run.z);
  out << "\nXY:\n" << matrix_to_text(f, xy);
  out << "\nserver: " << to_string(run.serve.kind);
  if (run.serve.forged) {
    out << " cell=(" << run.serve.row << "," << run.serve.col << ")";
    if (run.serve.kind == BehaviorKind::kRhoPerturb ||
        run.serve.kind == BehaviorKind::kRhoPerturbRelative) {
      out << " perturbation=" << format_real(run.serve.perturbation);
    }
    out << " noop=" << (run.serve.noop ? "true" : "false");
  }
  out << "\nZ == XY: " << (same_matrix(f, run.z, xy) ? "true" : "false") << "\n";
  out << "verification: " << to_string(run.report.mode) << " l=" << run.report.rounds;
  if (run.report.mode == VerifyMode::kTolerance) {
    out << " lambda=" << format_real(run.report.lambda)
        << " threshold=" << format_real(run.report.threshold);
  }
  out << " max_deviation=" << format_real(run.report.max_deviation())
      << " accepted=" << (run.report.accepted ? "true" : "false") << "\n";
  const CostReport counted = counted_costs(run.trace, cfg.overhead);
  out << "client_ops: " << counted.client_flops
      << " server_ops: " << counted.server_flops
      << " payload_bytes: " << run.trace.payload_bytes
      << " framing_bytes: " << run.trace.framing_bytes << "\n";
  return out.str();
}

template <ScalarBackend F>
Artifact verify_files(const F& f, const ExperimentConfig& cfg, const std::string& check) {
  const auto x = matrix_from_text(f, read_file(cfg.x_path));
  const auto y = matrix_from_text(f, read_file(cfg.y_path));
  const auto z = matrix_from_text(f, read_file(cfg.z_path));
  const auto report = verify(f, x, y, z, policy_for(cfg, check), cfg.float_model(),
                             CounterRng(cfg.seed));
  return {json_artifact(cfg, report_to_json(report)), report.accepted ? 0 : 1};
}

template <ScalarBackend F>
std::string attack(const F& f, const ExperimentConfig& cfg) {
  AttackConfig ac;
  ac.dims = cfg.dims;
  ac.trials = cfg.trials;
  ac.policy = policy_for(cfg, cfg.effective_check());
  ac.behavior = behavior_for(cfg);
  ac.key_span = cfg.key_span;
  ac.master_seed = cfg.seed;
  ac.threads = cfg.threads;
  const AttackStats stats = attack_experiment(f, ac, cfg.float_model());
  if (cfg.effective_format() == "csv") {
    return config_line(cfg) + kAttackCsvHeader + "\n" + stats_csv_row(stats);
  }
  return json_artifact(cfg, stats_to_json(stats));
}

template <ScalarBackend F>
std::string residuals(const F& f, const ExperimentConfig& cfg) {
  ResidualConfig rc;
  rc.dims = cfg.dims;
  rc.trials = cfg.trials;
  rc.key_span = cfg.key_span;
  rc.master_seed = cfg.seed;
  rc.threads = cfg.threads;
  rc.lambda = cfg.lambda;
  const ResidualProfile profile = residual_profile(f, rc, cfg.float_model());
  if (cfg.effective_format() == "json") {
    return json_artifact(cfg, profile_summary_json(profile));
  }
  return config_line(cfg) + kResidualCsvHeader + "\n" + residual_csv_rows(profile);
}

template <ScalarBackend F>
std::string costs(const F& f, const ExperimentConfig& cfg) {
  const CounterRng stream = trial_stream(cfg.seed, 0);
  CounterRng key_rng = stream.split(0);
  CounterRng input_rng = stream.split(1);
  const auto key = keygen(f, cfg.dims, key_rng, cfg.key_span);
  const auto x = random_matrix(f, cfg.dims.m, cfg.dims.n, input_rng);
  const auto y = random_matrix(f, cfg.dims.n, cfg.dims.s, input_rng);
  const auto run = run_protocol(f, x, y, key, policy_for(cfg, cfg.effective_check()),
                                cfg.float_model(), stream);
  const CostReport analytic =
      analytic_costs(cfg.dims, cfg.rounds, wire::kBytesPerScalar, cfg.overhead);
  const CostReport counted = counted_costs(run.trace, cfg.overhead);
  json result{{"analytic", cost_to_json(analytic)},
              {"counted", cost_to_json(counted)},
              {"counts_match", analytic == counted},
              {"payload_bytes", run.trace.payload_bytes},
              {"framing_bytes", run.trace.framing_bytes}};
  return json_artifact(cfg, std::move(result));
}

std::string sweep(const ExperimentConfig& cfg) {
  const auto rows = break_even_sweep(cfg.sweep_dims, cfg.rounds,
                                     cfg.bytes_per_scalar, cfg.sweep_overheads);
  return config_line(cfg) + kSweepCsvHeader + "\n" + sweep_csv_rows(rows);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (std::find(known_commands().begin(), known_commands().end(), command) ==
      known_commands().end()) {
    throw ConfigError("unknown command '" + command + "'");
  }
  if (!is_one_of(mode, {"field", "float"})) {
    throw ConfigError("mode must be 'field' or 'float', got '" + mode + "'");
  }
  if (dims.m == 0 || dims.n == 0 || dims.s == 0) {
    throw ConfigError("dimensions m, n, s must be positive");
  }
  if (trials == 0) throw ConfigError("trials must be >= 1");
  if (rounds == 0 && command != "costs" && command != "sweep") {
    throw ConfigError("verification rounds l must be >= 1");
  }
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (!(key_span.lo > 0.0) || !(key_span.hi >= key_span.lo) ||
      !std::isfinite(key_span.hi)) {
    throw ConfigError("key span must satisfy 0 < lo <= hi");
  }
  const BehaviorKind kind = parse_behavior(behavior);
  if (!check.empty()) parse_verify_mode(check);
  (void)float_model();
  if (mode == "field") {
    (void)PrimeField(modulus);
    if (kind == BehaviorKind::kRhoPerturb || kind == BehaviorKind::kRhoPerturbRelative) {
      throw ConfigError("behavior '" + behavior +
                        "' is a floating-point attack and needs --mode float");
    }
    if (effective_check() == "tolerance") {
      throw ConfigError("tolerance verification needs --mode float");
    }
  }
  if (command == "verify-tolerance" && mode != "float") {
    throw ConfigError("verify-tolerance needs --mode float");
  }
  if (target_row < 1 || target_row > dims.m || target_col < 1 || target_col > dims.s) {
    throw ConfigError("attack target cell outside the m x s result");
  }
  if (bytes_per_scalar == 0) throw ConfigError("bytes per scalar must be positive");
  if (!(overhead >= 0.0)) throw ConfigError("overhead must be >= 0");
  if (command == "sweep") {
    if (sweep_dims.empty() || sweep_overheads.empty()) {
      throw ConfigError("sweep needs nonempty --dims and --overheads");
    }
    for (auto d : sweep_dims) {
      if (d == 0) throw ConfigError("sweep dimensions must be positive");
    }
    for (double o : sweep_overheads) {
      if (!(o >= 0.0)) throw ConfigError("sweep overheads must be >= 0");
    }
  }
  if (command == "verify-exact" || command == "verify-tolerance") {
    if (x_path.empty() || y_path.empty() || z_path.empty()) {
      throw ConfigError(command + " needs --x, --y and --z matrix files");
    }
  }
  const std::string fmt = effective_format();
  const bool ok = command == "demo"                           ? fmt == "text"
                  : command == "attack"                       ? is_one_of(fmt, {"json", "csv"})
                  : command == "residuals"                    ? is_one_of(fmt, {"json", "csv"})
                  : command == "sweep"                        ? fmt == "csv"
                                                              : fmt == "json";
  if (!ok) throw ConfigError("format '" + fmt + "' not available for " + command);
}

std::string ExperimentConfig::effective_check() const {
  if (command == "verify-exact") return "exact";
  if (command == "verify-tolerance") return "tolerance";
  if (!check.empty()) return check;
  return mode == "field" ? "exact" : "tolerance";
}

std::string ExperimentConfig::effective_format() const {
  if (!format.empty()) return format;
  if (command == "demo") return "text";
  if (command == "residuals" || command == "sweep") return "csv";
  return "json";
}

FloatModel ExperimentConfig::float_model() const {
  const FloatModel host = FloatModel::binary64();
  return FloatModel(chi, precision, host.min_exponent(), host.max_exponent());
}

json config_to_json(const ExperimentConfig& c) {
  return {{"tool", kTool},
          {"version", ExperimentConfig::kVersion},
          {"command", c.command},
          {"mode", c.mode},
          {"m", c.dims.m},
          {"n", c.dims.n},
          {"s", c.dims.s},
          {"trials", c.trials},
          {"l", c.rounds},
          {"lambda", c.lambda},
          {"key_span", {{"lo", c.key_span.lo}, {"hi", c.key_span.hi}}},
          {"behavior", c.behavior},
          {"check", c.check},
          {"seed", c.seed},
          {"modulus", std::to_string(c.modulus)},
          {"chi", c.chi},
          {"p", c.precision},
          {"target", {c.target_row, c.target_col}},
          {"bytes_per_scalar", c.bytes_per_scalar},
          {"overhead", c.overhead},
          {"sweep_dims", c.sweep_dims},
          {"sweep_overheads", c.sweep_overheads},
          {"format", c.format},
          {"x", c.x_path},
          {"y", c.y_path},
          {"z", c.z_path}};
}

ExperimentConfig config_from_json(const json& j) {
  try {
    if (j.at("tool").get<std::string>() != kTool) {
      throw ConfigError("config was not produced by " + std::string(kTool));
    }
    const int version = j.at("version").get<int>();
    if (version != ExperimentConfig::kVersion) {
      throw ConfigError("config version " + std::to_string(version) +
                        " does not match tool version " +
                        std::to_string(ExperimentConfig::kVersion));
    }
    ExperimentConfig c;
    c.command = j.at("command").get<std::string>();
    c.mode = j.at("mode").get<std::string>();
    c.dims = {j.at("m").get<std::size_t>(), j.at("n").get<std::size_t>(),
              j.at("s").get<std::size_t>()};
    c.trials = j.at("trials").get<std::size_t>();
    c.rounds = j.at("l").get<std::size_t>();
    c.lambda = j.at("lambda").get<double>();
    c.key_span = {j.at("key_span").at("lo").get<double>(),
                  j.at("key_span").at("hi").get<double>()};
    c.behavior = j.at("behavior").get<std::string>();
    c.check = j.at("check").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.modulus = std::stoull(j.at("modulus").get<std::string>());
    c.chi = j.at("chi").get<int>();
    c.precision = j.at("p").get<int>();
    c.target_row = j.at("target").at(0).get<std::size_t>();
    c.target_col = j.at("target").at(1).get<std::size_t>();
    c.bytes_per_scalar = j.at("bytes_per_scalar").get<std::uint64_t>();
    c.overhead = j.at("overhead").get<double>();
    c.sweep_dims = j.at("sweep_dims").get<std::vector<std::size_t>>();
    c.sweep_overheads = j.at("sweep_overheads").get<std::vector<double>>();
    c.format = j.at("format").get<std::string>();
    c.x_path = j.at("x").get<std::string>();
    c.y_path = j.at("y").get<std::string>();
    c.z_path = j.at("z").get<std::string>();
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config json: ") + e.what());
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ConfigError*>(&e) != nullptr) throw;
    throw ParseError(std::string("config json: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& text) {
  std::string body = text;
  if (body.rfind(kConfigPrefix, 0) == 0) {
    const auto eol = body.find('\n');
    body = body.substr(std::string(kConfigPrefix).size(),
                       eol == std::string::npos ? std::string::npos
                                                : eol - std::string(kConfigPrefix).size());
  }
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (j.contains("config")) return config_from_json(j.at("config"));
  return config_from_json(j);
}

Artifact run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string& cmd = cfg.command;
  if (cmd == "sweep") return {sweep(cfg), 0};
  if (cmd == "verify-exact" || cmd == "verify-tolerance") {
    return with_backend(cfg, [&](const auto& f) {
      return verify_files(f, cfg, cfg.effective_check());
    });
  }
  return with_backend(cfg, [&](const auto& f) -> Artifact {
    if (cmd == "demo") return {demo(f, cfg), 0};
    if (cmd == "attack") return {attack(f, cfg), 0};
    if (cmd == "residuals") return {residuals(f, cfg), 0};
    return {costs(f, cfg), 0};
  });
}

int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Outsourced matrix multiplication: disguise, verification, "
               "forgery and cost experiments",
               "outmat"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string key_span = "1e-3,1e3";
  std::string out_path, save_config, replay_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--mode", cfg.mode, "Scalar backend: field or float");
    sub->add_option("--m", cfg.dims.m, "Rows of X");
    sub->add_option("--n", cfg.dims.n, "Columns of X / rows of Y");
    sub->add_option("--s", cfg.dims.s, "Columns of Y");
    sub->add_option("--seed", cfg.seed, "Master seed");
    sub->add_option("--l,--rounds", cfg.rounds, "Verification rounds");
    sub->add_option("--lambda", cfg.lambda, "Fault-tolerance multiplier");
    sub->add_option("--check", cfg.check, "Verifier: exact or tolerance");
    sub->add_option("--modulus", cfg.modulus, "Prime modulus for field mode");
    sub->add_option("--chi", cfg.chi, "Float model base");
    sub->add_option("--p", cfg.precision, "Float model precision");
    sub->add_option("--key-span", key_span, "Key magnitude span 'lo,hi' or a single value");
    sub->add_option("--format", cfg.format, "Artifact format");
    sub->add_option("--threads", cfg.threads, "Worker threads for trials");
    sub->add_option("--out", out_path,
                    std::string("Artifact path (relative paths resolve under $") +
                        kOutputDirEnv + ")");
    sub->add_option("--save-config", save_config, "Also write the config JSON here");
  };
  auto add_trials = [&](CLI::App* sub) {
    sub->add_option("--trials", cfg.trials, "Number of trials");
  };
  auto add_behavior = [&](CLI::App* sub) {
    sub->add_option("--behavior", cfg.behavior,
                    "Server: honest, random-forge, rho, rho-relative");
    sub->add_option("--target-row", cfg.target_row, "Row of Z' perturbed by rho attacks");
    sub->add_option("--target-col", cfg.target_col, "Column of Z' perturbed by rho attacks");
  };
  auto add_files = [&](CLI::App* sub) {
    sub->add_option("--x", cfg.x_path, "X matrix file")->required();
    sub->add_option("--y", cfg.y_path, "Y matrix file")->required();
    sub->add_option("--z", cfg.z_path, "Claimed product Z file")->required();
  };
  auto add_cost = [&](CLI::App* sub) {
    sub->add_option("--overhead", cfg.overhead, "Flop cost per communicated byte");
  };

  auto* demo_cmd = app.add_subcommand("demo", "Run the protocol once and print every step");
  add_common(demo_cmd);
  add_behavior(demo_cmd);
  add_cost(demo_cmd);
  auto* vexact = app.add_subcommand("verify-exact", "Exact check of Z = XY from files");
  add_common(vexact);
  add_files(vexact);
  auto* vtol = app.add_subcommand("verify-tolerance",
                                  "Relative-tolerance check of Z = XY from files");
  add_common(vtol);
  add_files(vtol);
  auto* attack_cmd = app.add_subcommand("attack", "Forgery acceptance experiment");
  add_common(attack_cmd);
  add_trials(attack_cmd);
  add_behavior(attack_cmd);
  auto* resid = app.add_subcommand("residuals", "Residual X(Yr) - Zr versus estimate");
  add_common(resid);
  add_trials(resid);
  auto* costs_cmd = app.add_subcommand("costs", "Analytic and counted costs");
  add_common(costs_cmd);
  add_cost(costs_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep", "Break-even sweep over square sizes");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--bytes-per-scalar", cfg.bytes_per_scalar, "Bytes per scalar");
  sweep_cmd->add_option("--dims", cfg.sweep_dims, "Square dimensions")->delimiter(',');
  sweep_cmd->add_option("--overheads", cfg.sweep_overheads, "Overhead factors")
      ->delimiter(',');
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a saved config or artifact");
  replay_cmd->add_option("--config", replay_path, "Config or artifact file")->required();
  replay_cmd->add_option("--out", out_path, "Artifact path");
  replay_cmd->add_option("--threads", cfg.threads, "Worker threads for trials");

  std::vector<std::string> argv_storage{"outmat"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (replay_cmd->parsed()) {
      const unsigned threads = cfg.threads;
      cfg = load_config(read_file(replay_path));
      cfg.threads = threads;
    } else {
      cfg.command = app.get_subcommands().front()->get_name();
      cfg.key_span = parse_key_span(key_span);
    }
    const Artifact artifact = run_experiment(cfg);
    if (!save_config.empty()) write_file(save_config, config_to_json(cfg).dump(2) + "\n");
    if (out_path.empty()) {
      out << artifact.text;
    } else {
      write_file(out_path, artifact.text);
    }
    return artifact.exit_code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace outmat

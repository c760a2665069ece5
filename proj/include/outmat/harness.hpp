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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "outmat/scalar.hpp"
#include "outmat/scheme.hpp"

namespace outmat {

/// Everything needed to reproduce one CLI run. Serialized into every
/// artifact; `threads` is an execution detail and is not serialized, so
/// serial and parallel runs of the same experiment produce identical bytes.
struct ExperimentConfig {
  static constexpr int kVersion = 1;

  std::string command = "demo";
  std::string mode = "float";  // "field" or "float"
  Dims dims{3, 3, 3};
  std::size_t trials = 100;
  std::size_t rounds = 1;  // l
  double lambda = 8.0;
  KeySpan key_span;
  std::string behavior = "honest";
  std::string check;  // "exact" or "tolerance"; empty picks by mode
  std::uint64_t seed = 1;
  std::uint64_t modulus = PrimeField::kDefaultModulus;
  int chi = 2;
  int precision = 53;
  std::size_t target_row = 1;
  std::size_t target_col = 1;
  std::uint64_t bytes_per_scalar = 8;
  double overhead = 0.0;
  std::vector<std::size_t> sweep_dims{8, 16, 32, 64, 128, 256, 512, 1024};
  std::vector<double> sweep_overheads{0.0, 1.0, 10.0, 100.0};
  std::string format;  // "json", "csv" or "text"; empty picks per command
  std::string x_path, y_path, z_path;
  unsigned threads = 1;

  // Throws ConfigError on any inconsistency.
  void validate() const;
  std::string effective_check() const;
  std::string effective_format() const;
  FloatModel float_model() const;
};

nlohmann::json config_to_json(const ExperimentConfig& cfg);
// Throws ConfigError on a version or tool mismatch, ParseError on bad JSON.
ExperimentConfig config_from_json(const nlohmann::json& j);
// Accepts a bare config, a JSON artifact with a "config" member, or a text
// artifact whose first line is "# config: {...}".
ExperimentConfig load_config(const std::string& text);

struct Artifact {
  std::string text;
  int exit_code = 0;  // 1 when a verify-* command rejects
};

/// Runs the command in `cfg` and renders its artifact. Deterministic per
/// config.
Artifact run_experiment(const ExperimentConfig& cfg);

/// CLI entry point. Exit codes: 0 success, 1 verification rejected,
/// 2 usage or input error.
int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace outmat

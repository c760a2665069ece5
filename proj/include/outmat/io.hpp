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

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>

#include <json.hpp>

#include "outmat/adversary.hpp"
#include "outmat/analysis.hpp"
#include "outmat/cost.hpp"
#include "outmat/errors.hpp"
#include "outmat/matrix.hpp"
#include "outmat/scheme.hpp"
#include "outmat/verification.hpp"

namespace outmat {

using json = nlohmann::json;

// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
std::string format_real(double v);

/// Text matrix format: a line "m n", then m lines of n scalars separated by
/// whitespace. Field scalars are decimal integers, real scalars shortest
/// round-trip decimals.
template <ScalarBackend F>
void write_matrix(std::ostream& out, const F& f,
                  const Matrix<typename F::value_type>& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 1; i <= a.rows(); ++i) {
    for (std::size_t j = 1; j <= a.cols(); ++j) {
      if (j > 1) out << ' ';
      out << f.format(a(i, j));
    }
    out << '\n';
  }
}

template <ScalarBackend F>
std::string matrix_to_text(const F& f, const Matrix<typename F::value_type>& a) {
  std::ostringstream out;
  write_matrix(out, f, a);
  return out.str();
}

template <ScalarBackend F>
Matrix<typename F::value_type> read_matrix(std::istream& in, const F& f) {
  long long rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || cols <= 0) {
    throw ParseError("matrix: expected positive 'm n' header");
  }
  Matrix<typename F::value_type> a(static_cast<std::size_t>(rows),
                                   static_cast<std::size_t>(cols), f.zero());
  std::string token;
  for (auto& e : a.entries()) {
    if (!(in >> token)) {
      throw ParseError("matrix: expected " + std::to_string(rows * cols) +
                       " entries");
    }
    e = f.parse(token);
  }
  if (in >> token) throw ParseError("matrix: trailing data '" + token + "'");
  return a;
}

template <ScalarBackend F>
Matrix<typename F::value_type> matrix_from_text(const F& f, const std::string& text) {
  std::istringstream in(text);
  return read_matrix(in, f);
}

json backend_json(const PrimeField& f);
json backend_json(const RealField& f);

template <ScalarBackend F>
json key_to_json(const F& f, const SecretKey<typename F::value_type>& key) {
  json j = backend_json(f);
  auto scalars = [&f](const auto& values) {
    json arr = json::array();
    for (const auto& v : values) arr.push_back(f.format(v));
    return arr;
  };
  auto perm = [](const Permutation& p) {
    return json(std::vector<std::size_t>(p.forward().begin(), p.forward().end()));
  };
  j["alphas"] = scalars(key.alphas);
  j["betas"] = scalars(key.betas);
  j["gammas"] = scalars(key.gammas);
  j["pi1"] = perm(key.pi1);
  j["pi2"] = perm(key.pi2);
  j["pi3"] = perm(key.pi3);
  return j;
}

template <ScalarBackend F>
SecretKey<typename F::value_type> key_from_json(const F& f, const json& j) {
  try {
    auto scalars = [&f](const json& arr) {
      std::vector<typename F::value_type> out;
      for (const auto& v : arr) out.push_back(f.parse(v.get<std::string>()));
      return out;
    };
    SecretKey<typename F::value_type> key;
    key.alphas = scalars(j.at("alphas"));
    key.betas = scalars(j.at("betas"));
    key.gammas = scalars(j.at("gammas"));
    key.pi1 = Permutation(j.at("pi1").get<std::vector<std::size_t>>());
    key.pi2 = Permutation(j.at("pi2").get<std::vector<std::size_t>>());
    key.pi3 = Permutation(j.at("pi3").get<std::vector<std::size_t>>());
    validate_key(f, key);
    return key;
  } catch (const json::exception& e) {
    throw ParseError(std::string("key json: ") + e.what());
  }
}

json real_json(double v);

template <class T>
json report_to_json(const VerificationReport<T>& report) {
  json rounds = json::array();
  for (const auto& rd : report.round_data) {
    rounds.push_back({{"max_deviation", real_json(rd.max_deviation)},
                      {"vacuous", rd.vacuous},
                      {"passed", rd.passed}});
  }
  return {{"mode", std::string(to_string(report.mode))},
          {"l", report.rounds},
          {"lambda", real_json(report.lambda)},
          {"threshold", real_json(report.threshold)},
          {"accepted", report.accepted},
          {"rounds", std::move(rounds)}};
}

json stats_to_json(const AttackStats& stats);

inline constexpr const char* kAttackCsvHeader =
    "trials,accepted_freq,wrong_accepted_freq,differs_freq,noop_freq,"
    "noop_freq_target_ge4,honest_accepted_freq";
std::string stats_csv_row(const AttackStats& stats);

json profile_summary_json(const ResidualProfile& profile);
json cost_to_json(const CostReport& cost);

}  // namespace outmat

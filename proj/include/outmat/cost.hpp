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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "outmat/counter.hpp"
#include "outmat/scheme.hpp"

namespace outmat {

/// Client work versus server work and traffic for one outsourced product.
///
/// client_flops = (mn + ns + ms) + l (ns + mn + ms + m): one op per scaled
/// entry in transform and compose, one per multiply-accumulate term of the
/// three matrix-vector products per round, plus m row comparisons.
/// server_flops = mns multiplications + m(n-1)s additions.
/// comm_bytes = bytes_per_scalar (mn + ns + ms) for X', Y' out and Z' back.
/// gain_ratio = server_flops / (client_flops + overhead_factor * comm_bytes),
/// where overhead_factor prices a byte of traffic (authentication,
/// encryption, latency) in flop equivalents.
struct CostReport {
  std::uint64_t client_flops = 0;
  std::uint64_t server_flops = 0;
  std::uint64_t comm_bytes = 0;
  double overhead_factor = 0.0;
  double gain_ratio = 0.0;

  bool beneficial() const { return gain_ratio > 1.0; }

  friend bool operator==(const CostReport&, const CostReport&) = default;
};

/// Counters and traffic recorded while running the protocol once.
struct RunTrace {
  Dims dims;
  std::size_t rounds = 0;
  OpCounter client;
  OpCounter server;
  std::uint64_t payload_bytes = 0;
  std::uint64_t framing_bytes = 0;
  std::uint64_t bytes_per_scalar = 8;
};

double gain_ratio(std::uint64_t server_flops, std::uint64_t client_flops,
                  std::uint64_t comm_bytes, double overhead_factor);

// Throws ConfigError for zero dimensions or a negative overhead.
CostReport analytic_costs(Dims dims, std::size_t rounds,
                          std::uint64_t bytes_per_scalar, double overhead_factor);

CostReport counted_costs(const RunTrace& trace, double overhead_factor);

struct SweepRow {
  Dims dims;
  std::size_t rounds = 0;
  std::uint64_t bytes_per_scalar = 0;
  double overhead = 0.0;
  CostReport cost;
};

/// Square shapes m = n = s = dim for every (dim, overhead) pair, dims outer.
std::vector<SweepRow> break_even_sweep(std::span<const std::size_t> dims,
                                       std::size_t rounds,
                                       std::uint64_t bytes_per_scalar,
                                       std::span<const double> overheads);

/// Smallest square dimension in [1, max_dim] at which outsourcing is
/// beneficial, if any.
std::optional<std::size_t> crossover_dimension(std::size_t rounds,
                                               std::uint64_t bytes_per_scalar,
                                               double overhead_factor,
                                               std::size_t max_dim);

inline constexpr const char* kSweepCsvHeader =
    "m,n,s,l,bytes_per_scalar,overhead,client_flops,server_flops,comm_bytes,"
    "gain_ratio,beneficial";

std::string sweep_csv_rows(const std::vector<SweepRow>& rows);

}  // namespace outmat

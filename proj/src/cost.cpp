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

#include "outmat/cost.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

#include "outmat/errors.hpp"
#include "outmat/io.hpp"

namespace outmat {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw std::overflow_error("cost count overflow");
  }
  return a * b;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  OpCounter::bump(a, b);
  return a;
}

}  // namespace

double gain_ratio(std::uint64_t server_flops, std::uint64_t client_flops,
                  std::uint64_t comm_bytes, double overhead_factor) {
  const double denom = static_cast<double>(client_flops) +
                       overhead_factor * static_cast<double>(comm_bytes);
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(server_flops) / denom;
}

CostReport analytic_costs(Dims d, std::size_t rounds, std::uint64_t bytes_per_scalar,
                          double overhead_factor) {
  if (d.m == 0 || d.n == 0 || d.s == 0) {
    throw ConfigError("cost model: dimensions must be positive");
  }
  if (!(overhead_factor >= 0.0)) throw ConfigError("overhead factor must be >= 0");
  const std::uint64_t mn = checked_mul(d.m, d.n);
  const std::uint64_t ns = checked_mul(d.n, d.s);
  const std::uint64_t ms = checked_mul(d.m, d.s);
  const std::uint64_t entries = checked_add(checked_add(mn, ns), ms);
  CostReport r;
  r.client_flops =
      checked_add(entries, checked_mul(rounds, checked_add(entries, d.m)));
  r.server_flops =
      checked_add(checked_mul(mn, d.s), checked_mul(checked_mul(d.m, d.n - 1), d.s));
  r.comm_bytes = checked_mul(bytes_per_scalar, entries);
  r.overhead_factor = overhead_factor;
  r.gain_ratio = gain_ratio(r.server_flops, r.client_flops, r.comm_bytes,
                            overhead_factor);
  return r;
}

CostReport counted_costs(const RunTrace& trace, double overhead_factor) {
  if (!(overhead_factor >= 0.0)) throw ConfigError("overhead factor must be >= 0");
  CostReport r;
  r.client_flops = trace.client.client_ops();
  r.server_flops = trace.server.server_ops();
  r.comm_bytes = trace.payload_bytes;
  r.overhead_factor = overhead_factor;
  r.gain_ratio = gain_ratio(r.server_flops, r.client_flops, r.comm_bytes,
                            overhead_factor);
  return r;
}

std::vector<SweepRow> break_even_sweep(std::span<const std::size_t> dims,
                                       std::size_t rounds,
                                       std::uint64_t bytes_per_scalar,
                                       std::span<const double> overheads) {
  if (dims.empty() || overheads.empty()) {
    throw ConfigError("sweep needs at least one dimension and one overhead");
  }
  std::vector<SweepRow> rows;
  rows.reserve(dims.size() * overheads.size());
  for (std::size_t dim : dims) {
    for (double overhead : overheads) {
      const Dims d{dim, dim, dim};
      rows.push_back({d, rounds, bytes_per_scalar, overhead,
                      analytic_costs(d, rounds, bytes_per_scalar, overhead)});
    }
  }
  return rows;
}

std::optional<std::size_t> crossover_dimension(std::size_t rounds,
                                               std::uint64_t bytes_per_scalar,
                                               double overhead_factor,
                                               std::size_t max_dim) {
  for (std::size_t dim = 1; dim <= max_dim; ++dim) {
    if (analytic_costs({dim, dim, dim}, rounds, bytes_per_scalar, overhead_factor)
            .beneficial()) {
      return dim;
    }
  }
  return std::nullopt;
}

std::string sweep_csv_rows(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  for (const auto& row : rows) {
    out << row.dims.m << ',' << row.dims.n << ',' << row.dims.s << ','
        << row.rounds << ',' << row.bytes_per_scalar << ','
        << format_real(row.overhead) << ',' << row.cost.client_flops << ','
        << row.cost.server_flops << ',' << row.cost.comm_bytes << ','
        << format_real(row.cost.gain_ratio) << ','
        << (row.cost.beneficial() ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace outmat

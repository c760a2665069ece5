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

#include <gtest/gtest.h>

#include "outmat/protocol.hpp"

namespace outmat {
namespace {

const FloatModel kModel = FloatModel::binary64();

// Closed form evaluated directly, for comparison with the library.
struct Expected {
  std::uint64_t client, server;
};
Expected closed_form(std::uint64_t m, std::uint64_t n, std::uint64_t s, std::uint64_t l) {
  return {(m * n + n * s + m * s) * (1 + l) + l * m, m * n * s + m * (n - 1) * s};
}

template <ScalarBackend F>
RunTrace traced_run(const F& f, Dims d, std::size_t rounds, std::uint64_t seed) {
  CounterRng rng(seed);
  const auto key = keygen(f, d, rng);
  const auto x = random_matrix(f, d.m, d.n, rng);
  const auto y = random_matrix(f, d.n, d.s, rng);
  const VerifyMode mode = F::kExact ? VerifyMode::kExact : VerifyMode::kTolerance;
  return run_protocol(f, x, y, key, {rounds, 8.0, mode}, kModel, rng.split(1)).trace;
}

TEST(AnalyticCostTest, Examples) {
  EXPECT_EQ(analytic_costs({10, 10, 10}, 1, 8, 0.0).comm_bytes, 2400u);
  const auto unit = analytic_costs({1, 1, 1}, 0, 8, 0.0);
  EXPECT_EQ(unit.client_flops, 3u);
  EXPECT_EQ(unit.server_flops, 1u);
  const auto c = analytic_costs({4, 3, 5}, 2, 8, 0.0);
  EXPECT_EQ(c.client_flops, 149u);
  EXPECT_EQ(c.server_flops, 100u);
  EXPECT_THROW(analytic_costs({0, 1, 1}, 1, 8, 0.0), ConfigError);
  EXPECT_THROW(analytic_costs({1, 1, 1}, 1, 8, -1.0), ConfigError);
}

TEST(AnalyticCostTest, GainIncreasesWithInnerDimension) {
  double previous = 0.0;
  for (std::size_t n : {10u, 100u, 1000u}) {
    const auto c = analytic_costs({50, n, 50}, 2, 8, 1.0);
    const Expected e = closed_form(50, n, 50, 2);
    const double expected = static_cast<double>(e.server) /
                            (static_cast<double>(e.client) +
                             8.0 * (50.0 * n + n * 50.0 + 2500.0));
    EXPECT_DOUBLE_EQ(c.gain_ratio, expected);
    EXPECT_GT(c.gain_ratio, previous);
    previous = c.gain_ratio;
  }
}

TEST(CountedCostTest, MatchesClosedForm) {
  const RealField r;
  const PrimeField f;
  struct Case {
    Dims d;
    std::size_t l;
  };
  for (const Case& c : {Case{{2, 2, 2}, 1}, Case{{1, 1, 1}, 0}, Case{{4, 3, 5}, 2}}) {
    const Expected e = closed_form(c.d.m, c.d.n, c.d.s, c.l);
    for (const RunTrace& trace : {traced_run(r, c.d, c.l, 1), traced_run(f, c.d, c.l, 1)}) {
      const auto counted = counted_costs(trace, 0.0);
      EXPECT_EQ(counted.client_flops, e.client);
      EXPECT_EQ(counted.server_flops, e.server);
      EXPECT_EQ(counted, analytic_costs(c.d, c.l, 8, 0.0));
    }
  }
  EXPECT_EQ(counted_costs(traced_run(r, {1, 1, 1}, 0, 5), 0.0).client_flops, 3u);
}

TEST(CountedCostTest, RandomShapesAgreeExactly) {
  const RealField r;
  const PrimeField f;
  CounterRng rng(2024);
  for (int t = 0; t < 50; ++t) {
    const Dims d{1 + rng.uniform_below(32), 1 + rng.uniform_below(32),
                 1 + rng.uniform_below(32)};
    const std::size_t l = rng.uniform_below(4);
    const double overhead = static_cast<double>(rng.uniform_below(20));
    const auto trace = t % 2 ? traced_run(r, d, l, t) : traced_run(f, d, l, t);
    EXPECT_EQ(counted_costs(trace, overhead), analytic_costs(d, l, 8, overhead))
        << d.m << "x" << d.n << "x" << d.s << " l=" << l;
  }
}

TEST(CountedCostTest, CommBytesMatchWirePayload) {
  const RealField r;
  const auto trace = traced_run(r, {3, 4, 5}, 1, 9);
  EXPECT_EQ(trace.payload_bytes, 8u * (12 + 20 + 15));
  EXPECT_EQ(trace.framing_bytes, 3u * wire::kHeaderBytes);
  EXPECT_EQ(counted_costs(trace, 0.0).comm_bytes, analytic_costs({3, 4, 5}, 1, 8, 0).comm_bytes);
}

TEST(SweepTest, ZeroOverheadBeneficialWhenServerDominates) {
  const std::vector<std::size_t> dims{1, 2, 3, 4, 8, 16, 64};
  const std::vector<double> overheads{0.0};
  for (const auto& row : break_even_sweep(dims, 1, 8, overheads)) {
    const Expected e = closed_form(row.dims.m, row.dims.n, row.dims.s, 1);
    EXPECT_EQ(row.cost.beneficial(), e.server > e.client) << row.dims.m;
  }
}

TEST(SweepTest, HugeOverheadNotBeneficialAtSmallDims) {
  const std::vector<std::size_t> dims{1, 4, 16, 64};
  const std::vector<double> overheads{1e6};
  for (const auto& row : break_even_sweep(dims, 2, 8, overheads)) {
    EXPECT_FALSE(row.cost.beneficial());
  }
}

TEST(SweepTest, MonotoneInDimension) {
  std::vector<std::size_t> dims;
  for (std::size_t d = 1; d <= 400; d += 7) dims.push_back(d);
  const std::vector<double> overheads{0.0, 1.0, 10.0, 100.0};
  const auto rows = break_even_sweep(dims, 2, 8, overheads);
  ASSERT_EQ(rows.size(), dims.size() * overheads.size());
  for (std::size_t k = overheads.size(); k < rows.size(); ++k) {
    EXPECT_GE(rows[k].cost.gain_ratio, rows[k - overheads.size()].cost.gain_ratio);
  }
}

TEST(SweepTest, CrossoverForTenFlopsPerByte) {
  // Brute force over the closed form: 2n^3 - n^2 > 9n^2 + 2n + 10 * 24n^2.
  std::size_t brute = 0;
  for (std::uint64_t n = 1; n < 1000 && brute == 0; ++n) {
    if (2 * n * n * n - n * n > 9 * n * n + 2 * n + 240 * n * n) brute = n;
  }
  EXPECT_EQ(brute, 126u);
  EXPECT_EQ(crossover_dimension(2, 8, 10.0, 1000), brute);
  EXPECT_EQ(crossover_dimension(2, 8, 1e9, 100), std::nullopt);
}

TEST(SweepTest, ClientShareAt256) {
  const auto c = analytic_costs({256, 256, 256}, 2, 8, 0.0);
  EXPECT_LE(static_cast<double>(c.client_flops), 0.05 * static_cast<double>(c.server_flops));
}

TEST(SweepTest, CsvRows) {
  const std::vector<std::size_t> dims{2};
  const std::vector<double> overheads{0.5};
  const auto rows = break_even_sweep(dims, 1, 8, overheads);
  // client 12 + 14 = 26, server 8 + 4 = 12, bytes 96, gain 12 / (26 + 48).
  EXPECT_EQ(sweep_csv_rows(rows), "2,2,2,1,8,0.5,26,12,96," +
                                      RealField{}.format(12.0 / 74.0) + ",false\n");
  EXPECT_STREQ(kSweepCsvHeader,
               "m,n,s,l,bytes_per_scalar,overhead,client_flops,server_flops,comm_bytes,"
               "gain_ratio,beneficial");
  EXPECT_THROW(break_even_sweep({}, 1, 8, overheads), ConfigError);
}

}  // namespace
}  // namespace outmat

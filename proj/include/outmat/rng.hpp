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
#include <limits>

namespace outmat {

/// Counter-based SplitMix64 stream.
///
/// Output k of a stream with key K is mix64(K + k * 0x9E3779B97F4A7C15),
/// i.e. plain SplitMix64 started at state K, so any output can be computed
/// without generating its predecessors. Substreams are derived with
/// `split(i)`, whose key is mix64(K ^ mix64(i + 0x632BE59BD9B4E019)).
/// The experiment runner derives master_seed -> trial -> phase -> round
/// streams this way, which makes results independent of trial scheduling
/// and identical on every platform.
///
/// All integer and real draws go through `uniform_below` and `uniform01`
/// rather than <random> distributions, whose output is
/// implementation-defined.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key = 0) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return next(); }
  result_type next();

  // Independent child stream; does not advance this stream.
  [[nodiscard]] CounterRng split(std::uint64_t index) const;

  // Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01();

  bool fair_bit() { return (next() >> 63) != 0; }

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

  static std::uint64_t mix64(std::uint64_t z);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace outmat

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

#include <limits>
#include <stdexcept>
#include <string>

#include "outmat/counter.hpp"
#include "outmat/matrix.hpp"

namespace outmat {

void OpCounter::bump(std::uint64_t& slot, std::uint64_t by) {
  if (by > std::numeric_limits<std::uint64_t>::max() - slot) {
    throw std::overflow_error("operation counter overflow");
  }
  slot += by;
}

std::uint64_t OpCounter::client_ops() const {
  std::uint64_t total = 0;
  bump(total, scalings);
  bump(total, macs);
  bump(total, compares);
  return total;
}

std::uint64_t OpCounter::server_ops() const {
  std::uint64_t total = 0;
  bump(total, muls);
  bump(total, adds);
  return total;
}

OpCounter& OpCounter::operator+=(const OpCounter& other) {
  bump(scalings, other.scalings);
  bump(macs, other.macs);
  bump(compares, other.compares);
  bump(muls, other.muls);
  bump(adds, other.adds);
  return *this;
}

Permutation::Permutation(std::vector<std::size_t> forward)
    : forward_(std::move(forward)) {
  std::vector<bool> seen(forward_.size() + 1, false);
  for (std::size_t v : forward_) {
    if (v < 1 || v > forward_.size() || seen[v]) {
      throw KeyError("not a permutation of {1.." +
                     std::to_string(forward_.size()) + "}");
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t k) {
  std::vector<std::size_t> fwd(k);
  for (std::size_t i = 0; i < k; ++i) fwd[i] = i + 1;
  return Permutation(std::move(fwd));
}

Permutation Permutation::random(std::size_t k, CounterRng& rng) {
  std::vector<std::size_t> fwd(k);
  for (std::size_t i = 0; i < k; ++i) fwd[i] = i + 1;
  for (std::size_t i = k; i > 1; --i) {
    std::swap(fwd[i - 1], fwd[rng.uniform_below(i)]);
  }
  return Permutation(std::move(fwd));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(forward_.size());
  for (std::size_t i = 0; i < forward_.size(); ++i) inv[forward_[i] - 1] = i + 1;
  return Permutation(std::move(inv));
}

}  // namespace outmat

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

namespace outmat {

/// Scalar operation counts for one protocol run.
///
/// Units: a `scaling` is one entry multiplied by a key ratio (transform or
/// compose); a `mac` is one multiply-accumulate term of a matrix-vector
/// product; a `compare` is one per-row verification test. `muls` and `adds`
/// are the separate multiplications and additions of a full matrix product.
struct OpCounter {
  std::uint64_t scalings = 0;
  std::uint64_t macs = 0;
  std::uint64_t compares = 0;
  std::uint64_t muls = 0;
  std::uint64_t adds = 0;

  // Throws std::overflow_error on wraparound.
  static void bump(std::uint64_t& slot, std::uint64_t by);

  std::uint64_t client_ops() const;
  std::uint64_t server_ops() const;

  OpCounter& operator+=(const OpCounter& other);
  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

}  // namespace outmat

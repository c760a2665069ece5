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
#include <span>
#include <vector>

#include "outmat/matrix.hpp"
#include "outmat/scalar.hpp"

namespace outmat::wire {

// Frame layout, little-endian:
//   magic "OMX1" | u8 scalar kind | 3 zero bytes | u32 rows | u32 cols
//   followed by rows * cols 8-byte scalars (binary64 bits or field value).
inline constexpr std::size_t kHeaderBytes = 16;
inline constexpr std::size_t kBytesPerScalar = 8;

enum class ScalarKind : std::uint8_t { kReal = 1, kField = 2 };

struct Frame {
  std::vector<std::uint8_t> bytes;

  std::size_t framing_bytes() const { return kHeaderBytes; }
  std::size_t payload_bytes() const { return bytes.size() - kHeaderBytes; }
};

Frame encode(const Matrix<double>& a);
Frame encode(const Matrix<Fp>& a);

// Throws ParseError on a malformed frame or kind mismatch; field values
// must lie in [0, q).
Matrix<double> decode_real(std::span<const std::uint8_t> bytes);
Matrix<Fp> decode_field(std::span<const std::uint8_t> bytes, const PrimeField& f);

inline Frame encode_for(const RealField&, const Matrix<double>& a) { return encode(a); }
inline Frame encode_for(const PrimeField&, const Matrix<Fp>& a) { return encode(a); }
inline Matrix<double> decode_for(const RealField&, std::span<const std::uint8_t> b) {
  return decode_real(b);
}
inline Matrix<Fp> decode_for(const PrimeField& f, std::span<const std::uint8_t> b) {
  return decode_field(b, f);
}

}  // namespace outmat::wire

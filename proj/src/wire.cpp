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

#include "outmat/wire.hpp"

#include <bit>
#include <limits>
#include <string>

#include "outmat/errors.hpp"

namespace outmat::wire {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> bytes, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint64_t>(bytes[at + i]) << (8 * i);
  }
  return v;
}

template <class T, class ToBits>
Frame encode_impl(const Matrix<T>& a, ScalarKind kind, ToBits to_bits) {
  if (a.rows() > std::numeric_limits<std::uint32_t>::max() ||
      a.cols() > std::numeric_limits<std::uint32_t>::max()) {
    throw ShapeError("matrix too large for wire frame");
  }
  Frame frame;
  frame.bytes.reserve(kHeaderBytes + a.entries().size() * kBytesPerScalar);
  frame.bytes.insert(frame.bytes.end(), {'O', 'M', 'X', '1'});
  frame.bytes.push_back(static_cast<std::uint8_t>(kind));
  frame.bytes.insert(frame.bytes.end(), {0, 0, 0});
  put_u32(frame.bytes, static_cast<std::uint32_t>(a.rows()));
  put_u32(frame.bytes, static_cast<std::uint32_t>(a.cols()));
  for (const T& e : a.entries()) put_u64(frame.bytes, to_bits(e));
  return frame;
}

// Returns (rows, cols) after validating header and length.
std::pair<std::size_t, std::size_t> read_header(std::span<const std::uint8_t> bytes,
                                                ScalarKind kind) {
  if (bytes.size() < kHeaderBytes || bytes[0] != 'O' || bytes[1] != 'M' ||
      bytes[2] != 'X' || bytes[3] != '1') {
    throw ParseError("wire frame: bad magic");
  }
  if (bytes[4] != static_cast<std::uint8_t>(kind)) {
    throw ParseError("wire frame: scalar kind mismatch");
  }
  const auto rows = static_cast<std::size_t>(get_le(bytes, 8, 4));
  const auto cols = static_cast<std::size_t>(get_le(bytes, 12, 4));
  if (rows == 0 || cols == 0) throw ParseError("wire frame: empty matrix");
  if (bytes.size() != kHeaderBytes + rows * cols * kBytesPerScalar) {
    throw ParseError("wire frame: length does not match " + std::to_string(rows) +
                     "x" + std::to_string(cols));
  }
  return {rows, cols};
}

}  // namespace

Frame encode(const Matrix<double>& a) {
  return encode_impl(a, ScalarKind::kReal,
                     [](double v) { return std::bit_cast<std::uint64_t>(v); });
}

Frame encode(const Matrix<Fp>& a) {
  return encode_impl(a, ScalarKind::kField, [](Fp v) { return v.value; });
}

Matrix<double> decode_real(std::span<const std::uint8_t> bytes) {
  auto [rows, cols] = read_header(bytes, ScalarKind::kReal);
  std::vector<double> entries(rows * cols);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    entries[k] = std::bit_cast<double>(get_le(bytes, kHeaderBytes + 8 * k, 8));
  }
  return Matrix<double>(rows, cols, std::move(entries));
}

Matrix<Fp> decode_field(std::span<const std::uint8_t> bytes, const PrimeField& f) {
  auto [rows, cols] = read_header(bytes, ScalarKind::kField);
  std::vector<Fp> entries(rows * cols);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::uint64_t v = get_le(bytes, kHeaderBytes + 8 * k, 8);
    if (v >= f.modulus()) throw ParseError("wire frame: field value out of range");
    entries[k] = Fp{v};
  }
  return Matrix<Fp>(rows, cols, std::move(entries));
}

}  // namespace outmat::wire

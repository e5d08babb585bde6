/*
 * Copyright 2026 The hecredit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HECREDIT_COMMON_BYTE_IO_H_
#define HECREDIT_COMMON_BYTE_IO_H_

#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "hecredit/common/error.h"

namespace hecredit {

using Bytes = std::vector<std::uint8_t>;

// Little-endian append-only writer.
class ByteWriter {
 public:
  void PutU8(std::uint8_t v) { out_.push_back(v); }
  void PutU32(std::uint32_t v) { PutLe(v, 4); }
  void PutU64(std::uint64_t v) { PutLe(v, 8); }
  void PutI32(std::int32_t v) { PutU32(static_cast<std::uint32_t>(v)); }
  void PutF64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    PutU64(bits);
  }
  // Writes the low `width` bytes of v.
  void PutLe(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void PutBytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void PutTag(std::string_view tag) { out_.insert(out_.end(), tag.begin(), tag.end()); }

  // Reserves a u64 length slot; FinishSection backfills it with the number of
  // bytes written since.
  std::size_t BeginSection() {
    std::size_t at = out_.size();
    PutU64(0);
    return at;
  }
  void FinishSection(std::size_t at) {
    std::uint64_t len = out_.size() - at - 8;
    for (int i = 0; i < 8; ++i) out_[at + i] = static_cast<std::uint8_t>(len >> (8 * i));
  }

  void Reserve(std::size_t n) { out_.reserve(n); }
  std::size_t size() const { return out_.size(); }
  Bytes Take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Bounds-checked little-endian reader. Every overrun raises kTruncated.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t GetU8() { return static_cast<std::uint8_t>(GetLe(1)); }
  std::uint32_t GetU32() { return static_cast<std::uint32_t>(GetLe(4)); }
  std::uint64_t GetU64() { return GetLe(8); }
  std::int32_t GetI32() { return static_cast<std::int32_t>(GetU32()); }
  double GetF64() {
    std::uint64_t bits = GetU64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::uint64_t GetLe(int width) {
    Need(width);
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t{in_[pos_ + i]} << (8 * i);
    pos_ += width;
    return v;
  }
  std::span<const std::uint8_t> GetBytes(std::size_t n) {
    Need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  // Reads a u64 length prefix and returns a reader over exactly that section.
  ByteReader GetSection() {
    std::uint64_t len = GetU64();
    if (len > remaining()) throw Error(ErrorCode::kTruncated, "section length exceeds input");
    return ByteReader(GetBytes(static_cast<std::size_t>(len)));
  }

  std::size_t remaining() const { return in_.size() - pos_; }
  bool done() const { return pos_ == in_.size(); }

 private:
  void Need(std::size_t n) const {
    if (n > remaining()) throw Error(ErrorCode::kTruncated, "unexpected end of input");
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace hecredit

#endif  // HECREDIT_COMMON_BYTE_IO_H_

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

#include "hecredit/ring/random.h"

#include <sodium.h>

#include <cstring>

#include "hecredit/common/error.h"

namespace hecredit::ring {
namespace {

void EnsureSodium() {
  static const bool ready = sodium_init() >= 0;
  if (!ready) throw Error(ErrorCode::kInternal, "libsodium initialization failed");
}

}  // namespace

RandomSource::RandomSource(const std::array<std::uint8_t, 32>& key) : key_(key) {}

RandomSource RandomSource::FromSeed(std::uint64_t seed) {
  EnsureSodium();
  std::uint8_t input[24] = {'h', 'e', 'c', 'r', 'e', 'd', 'i', 't', '-', 'r', 'n', 'g', '-', 'v', '1', 0};
  for (int i = 0; i < 8; ++i) input[16 + i] = static_cast<std::uint8_t>(seed >> (8 * i));
  std::array<std::uint8_t, 32> key;
  crypto_generichash(key.data(), key.size(), input, sizeof input, nullptr, 0);
  return RandomSource(key);
}

RandomSource RandomSource::FromSystem() {
  EnsureSodium();
  std::array<std::uint8_t, 32> key;
  randombytes_buf(key.data(), key.size());
  return RandomSource(key);
}

void RandomSource::Refill() {
  std::uint8_t nonce[crypto_stream_chacha20_NONCEBYTES];
  for (int i = 0; i < 8; ++i) nonce[i] = static_cast<std::uint8_t>(block_ >> (8 * i));
  crypto_stream_chacha20(buffer_.data(), buffer_.size(), nonce, key_.data());
  ++block_;
  pos_ = 0;
}

RandomSource::result_type RandomSource::operator()() {
  if (pos_ + 8 > buffer_.size()) Refill();
  std::uint64_t v;
  std::memcpy(&v, buffer_.data() + pos_, 8);
  pos_ += 8;
  return v;
}

std::uint64_t RandomSource::UniformBelow(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::kInvalidArgument, "UniformBelow(0)");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = max() - max() % bound;
  for (;;) {
    std::uint64_t v = (*this)();
    if (v < limit) return v % bound;
  }
}

RandomSource RandomSource::Fork() {
  std::array<std::uint8_t, 32> key;
  for (std::size_t i = 0; i < key.size(); i += 8) {
    std::uint64_t v = (*this)();
    std::memcpy(key.data() + i, &v, 8);
  }
  return RandomSource(key);
}

}  // namespace hecredit::ring

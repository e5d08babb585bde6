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

#ifndef HECREDIT_RING_RANDOM_H_
#define HECREDIT_RING_RANDOM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>

namespace hecredit::ring {

// ChaCha20 keystream generator usable as a UniformRandomBitGenerator.
// Seeded sources are reproducible; system sources draw their key from the OS.
// Not thread-safe: give each task its own source (see Fork).
class RandomSource {
 public:
  using result_type = std::uint64_t;

  static RandomSource FromSeed(std::uint64_t seed);
  static RandomSource FromSystem();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Uniform in [0, bound). bound must be nonzero.
  std::uint64_t UniformBelow(std::uint64_t bound);

  // Independent child stream keyed from this stream's output.
  RandomSource Fork();

 private:
  explicit RandomSource(const std::array<std::uint8_t, 32>& key);
  void Refill();

  static constexpr std::size_t kBufferBytes = 4096;

  std::array<std::uint8_t, 32> key_{};
  std::uint64_t block_ = 0;
  std::array<std::uint8_t, kBufferBytes> buffer_{};
  std::size_t pos_ = kBufferBytes;
};

}  // namespace hecredit::ring

#endif  // HECREDIT_RING_RANDOM_H_

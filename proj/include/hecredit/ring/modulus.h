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

#ifndef HECREDIT_RING_MODULUS_H_
#define HECREDIT_RING_MODULUS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hecredit::ring {

// Largest supported prime width. Keeps a + b below 2^63 and products inside
// unsigned __int128.
inline constexpr int kMaxPrimeBits = 60;

inline std::uint64_t AddMod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  std::uint64_t s = a + b;
  return s >= q ? s - q : s;
}

inline std::uint64_t SubMod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return a >= b ? a - b : a + (q - b);
}

inline std::uint64_t NegMod(std::uint64_t a, std::uint64_t q) { return a == 0 ? 0 : q - a; }

inline std::uint64_t MulMod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
}

// Maps a signed integer to its residue in [0, q).
inline std::uint64_t ReduceSigned(std::int64_t v, std::uint64_t q) {
  if (v >= 0) return static_cast<std::uint64_t>(v) % q;
  std::uint64_t r = static_cast<std::uint64_t>(-(v + 1)) % q;  // avoids overflow at INT64_MIN
  return q - 1 - r;
}

// Representative of a in (-q/2, q/2].
inline std::int64_t Centered(std::uint64_t a, std::uint64_t q) {
  return a > q / 2 ? -static_cast<std::int64_t>(q - a) : static_cast<std::int64_t>(a);
}

// Shoup precomputation for multiplying by a fixed operand w: floor(w * 2^64 / q).
inline std::uint64_t ShoupPrecompute(std::uint64_t w, std::uint64_t q) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(w) << 64) / q);
}

inline std::uint64_t MulModShoup(std::uint64_t x, std::uint64_t w, std::uint64_t w_shoup,
                                 std::uint64_t q) {
  std::uint64_t hi = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * w_shoup) >> 64);
  std::uint64_t r = x * w - hi * q;
  return r >= q ? r - q : r;
}

std::uint64_t PowMod(std::uint64_t base, std::uint64_t exp, std::uint64_t q);

// Inverse modulo a prime q. Requires a != 0 mod q.
std::uint64_t InvMod(std::uint64_t a, std::uint64_t q);

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool IsPrime(std::uint64_t n);

// An NTT-friendly prime: value = 1 (mod 2N) with `root` a primitive 2N-th
// root of unity, i.e. root^N = -1 (mod value).
struct NttPrime {
  std::uint64_t value = 0;
  int bit_size = 0;
  std::uint64_t root = 0;

  friend bool operator==(const NttPrime&, const NttPrime&) = default;
};

// Smallest primitive 2N-th root of unity modulo q. Throws kInvalidArgument
// when q is not 1 mod 2N.
std::uint64_t FindPrimitiveRoot(std::uint64_t q, std::size_t degree);

// True iff `p` satisfies every NttPrime invariant for ring degree `degree`.
bool IsValidNttPrime(const NttPrime& p, std::size_t degree);

// One distinct prime per entry of `bit_sizes`, each exactly that many bits
// wide and 1 mod 2N, taken as the largest available candidate. Throws
// kInvalidArgument when a width has no remaining candidate.
std::vector<NttPrime> GenerateNttPrimes(std::size_t degree, std::span<const int> bit_sizes);

}  // namespace hecredit::ring

#endif  // HECREDIT_RING_MODULUS_H_

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

#include "hecredit/ring/modulus.h"

#include <algorithm>
#include <string>

#include "hecredit/common/error.h"

namespace hecredit::ring {

std::uint64_t PowMod(std::uint64_t base, std::uint64_t exp, std::uint64_t q) {
  std::uint64_t result = 1 % q;
  base %= q;
  while (exp > 0) {
    if (exp & 1) result = MulMod(result, base, q);
    base = MulMod(base, base, q);
    exp >>= 1;
  }
  return result;
}

std::uint64_t InvMod(std::uint64_t a, std::uint64_t q) {
  if (a % q == 0) throw Error(ErrorCode::kInvalidArgument, "zero has no modular inverse");
  return PowMod(a, q - 2, q);
}

bool IsPrime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = PowMod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = MulMod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t FindPrimitiveRoot(std::uint64_t q, std::size_t degree) {
  const std::uint64_t order = 2 * static_cast<std::uint64_t>(degree);
  if (q < 3 || (q - 1) % order != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "prime " + std::to_string(q) + " is not 1 mod " + std::to_string(order));
  }
  // Any root r with r^N = -1 has order exactly 2N since 2N is a power of two.
  std::uint64_t found = 0;
  for (std::uint64_t x = 2; x < q; ++x) {
    std::uint64_t r = PowMod(x, (q - 1) / order, q);
    if (PowMod(r, degree, q) == q - 1) {
      found = r;
      break;
    }
  }
  if (found == 0) throw Error(ErrorCode::kInvalidArgument, "no primitive root found");
  // Canonicalize to the smallest primitive root: the odd powers of `found`.
  std::uint64_t best = found;
  std::uint64_t step = MulMod(found, found, q);
  std::uint64_t cur = found;
  for (std::uint64_t i = 1; i < degree; ++i) {
    cur = MulMod(cur, step, q);
    best = std::min(best, cur);
  }
  return best;
}

bool IsValidNttPrime(const NttPrime& p, std::size_t degree) {
  if (degree == 0 || (degree & (degree - 1)) != 0) return false;
  if (p.bit_size < 2 || p.bit_size > kMaxPrimeBits) return false;
  if (p.value >> p.bit_size != 0 || p.value >> (p.bit_size - 1) != 1) return false;
  if ((p.value - 1) % (2 * degree) != 0 || !IsPrime(p.value)) return false;
  if (p.root == 0 || p.root >= p.value) return false;
  return PowMod(p.root, degree, p.value) == p.value - 1;
}

std::vector<NttPrime> GenerateNttPrimes(std::size_t degree, std::span<const int> bit_sizes) {
  const std::uint64_t order = 2 * static_cast<std::uint64_t>(degree);
  std::vector<NttPrime> out;
  for (int bits : bit_sizes) {
    if (bits < 2 || bits > kMaxPrimeBits) {
      throw Error(ErrorCode::kInvalidArgument, "prime bit size out of range: " + std::to_string(bits));
    }
    const std::uint64_t lo = std::uint64_t{1} << (bits - 1);
    const std::uint64_t hi = std::uint64_t{1} << bits;
    bool found = false;
    if (hi > order) {
      for (std::uint64_t c = ((hi - 1) / order) * order + 1; c >= lo && c > order; c -= order) {
        if (c >= hi) continue;
        bool used = std::any_of(out.begin(), out.end(), [c](const NttPrime& p) { return p.value == c; });
        if (used || !IsPrime(c)) continue;
        out.push_back({c, bits, FindPrimitiveRoot(c, degree)});
        found = true;
        break;
      }
    }
    if (!found) {
      throw Error(ErrorCode::kInvalidArgument, "no " + std::to_string(bits) + "-bit prime = 1 mod " +
                                                   std::to_string(order) + " available");
    }
  }
  return out;
}

}  // namespace hecredit::ring

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

#include "hecredit/ring/ring_context.h"

#include <string>

#include "hecredit/common/error.h"

namespace hecredit::ring {
namespace {

std::size_t BitReverse(std::size_t v, int bits) {
  std::size_t r = 0;
  for (int i = 0; i < bits; ++i) r |= ((v >> i) & 1) << (bits - 1 - i);
  return r;
}

bool IsPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

NttTables::NttTables(const NttPrime& prime, std::size_t degree)
    : prime_(prime),
      degree_(degree),
      root_powers_(degree),
      root_powers_shoup_(degree),
      inv_root_powers_(degree),
      inv_root_powers_shoup_(degree) {
  const std::uint64_t q = prime.value;
  int log_n = 0;
  while ((std::size_t{1} << log_n) < degree) ++log_n;
  const std::uint64_t inv_root = InvMod(prime.root, q);
  std::uint64_t power = 1;
  std::uint64_t inv_power = 1;
  for (std::size_t i = 0; i < degree; ++i) {
    std::size_t r = BitReverse(i, log_n);
    root_powers_[r] = power;
    inv_root_powers_[r] = inv_power;
    power = MulMod(power, prime.root, q);
    inv_power = MulMod(inv_power, inv_root, q);
  }
  for (std::size_t i = 0; i < degree; ++i) {
    root_powers_shoup_[i] = ShoupPrecompute(root_powers_[i], q);
    inv_root_powers_shoup_[i] = ShoupPrecompute(inv_root_powers_[i], q);
  }
  inv_degree_ = InvMod(degree % q, q);
  inv_degree_shoup_ = ShoupPrecompute(inv_degree_, q);
}

void NttTables::Forward(std::span<std::uint64_t> a) const {
  const std::uint64_t q = prime_.value;
  const std::size_t n = degree_;
  std::size_t t = n;
  for (std::size_t m = 1; m < n; m <<= 1) {
    t >>= 1;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j1 = 2 * i * t;
      const std::uint64_t w = root_powers_[m + i];
      const std::uint64_t ws = root_powers_shoup_[m + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        std::uint64_t u = a[j];
        std::uint64_t v = MulModShoup(a[j + t], w, ws, q);
        a[j] = AddMod(u, v, q);
        a[j + t] = SubMod(u, v, q);
      }
    }
  }
}

void NttTables::Inverse(std::span<std::uint64_t> a) const {
  const std::uint64_t q = prime_.value;
  const std::size_t n = degree_;
  std::size_t t = 1;
  for (std::size_t m = n; m > 1; m >>= 1) {
    const std::size_t h = m >> 1;
    std::size_t j1 = 0;
    for (std::size_t i = 0; i < h; ++i) {
      const std::uint64_t w = inv_root_powers_[h + i];
      const std::uint64_t ws = inv_root_powers_shoup_[h + i];
      for (std::size_t j = j1; j < j1 + t; ++j) {
        std::uint64_t u = a[j];
        std::uint64_t v = a[j + t];
        a[j] = AddMod(u, v, q);
        a[j + t] = MulModShoup(SubMod(u, v, q), w, ws, q);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (auto& x : a) x = MulModShoup(x, inv_degree_, inv_degree_shoup_, q);
}

std::shared_ptr<const RingContext> RingContext::Create(std::size_t degree, std::vector<NttPrime> primes) {
  if (!IsPowerOfTwo(degree) || degree < 2) {
    throw Error(ErrorCode::kInvalidArgument, "ring degree must be a power of two >= 2, got " +
                                                 std::to_string(degree));
  }
  if (primes.empty()) throw Error(ErrorCode::kInvalidArgument, "modulus chain is empty");
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (!IsValidNttPrime(primes[i], degree)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "prime " + std::to_string(primes[i].value) + " is not NTT-friendly for N=" +
                      std::to_string(degree));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (primes[j].value == primes[i].value) {
        throw Error(ErrorCode::kInvalidArgument, "duplicate prime in modulus chain");
      }
    }
  }
  return std::shared_ptr<const RingContext>(new RingContext(degree, std::move(primes)));
}

RingContext::RingContext(std::size_t degree, std::vector<NttPrime> primes)
    : degree_(degree), log_degree_(0), primes_(std::move(primes)) {
  while ((std::size_t{1} << log_degree_) < degree_) ++log_degree_;
  tables_.reserve(primes_.size());
  for (const auto& p : primes_) tables_.emplace_back(p, degree_);
}

}  // namespace hecredit::ring

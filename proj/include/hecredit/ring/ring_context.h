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

#ifndef HECREDIT_RING_RING_CONTEXT_H_
#define HECREDIT_RING_RING_CONTEXT_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hecredit/ring/modulus.h"

namespace hecredit::ring {

// Precomputed twiddles for the negacyclic NTT of one prime. Powers of the
// 2N-th root are stored in bit-reversed order so the transform folds the
// X^N + 1 twist into the butterflies.
class NttTables {
 public:
  NttTables(const NttPrime& prime, std::size_t degree);

  const NttPrime& prime() const { return prime_; }
  std::uint64_t modulus() const { return prime_.value; }
  std::size_t degree() const { return degree_; }

  // In place. Output of Forward is in bit-reversed evaluation order, which is
  // what Inverse expects.
  void Forward(std::span<std::uint64_t> values) const;
  void Inverse(std::span<std::uint64_t> values) const;

 private:
  NttPrime prime_;
  std::size_t degree_;
  std::vector<std::uint64_t> root_powers_;
  std::vector<std::uint64_t> root_powers_shoup_;
  std::vector<std::uint64_t> inv_root_powers_;
  std::vector<std::uint64_t> inv_root_powers_shoup_;
  std::uint64_t inv_degree_;
  std::uint64_t inv_degree_shoup_;
};

// Ring Z[X]/(X^N + 1) with an ordered RNS modulus chain. Immutable and shared
// by every polynomial built on it.
class RingContext {
 public:
  // Throws kInvalidArgument when degree is not a power of two, a prime is not
  // NTT-friendly for it, or primes repeat.
  static std::shared_ptr<const RingContext> Create(std::size_t degree, std::vector<NttPrime> primes);

  std::size_t degree() const { return degree_; }
  int log_degree() const { return log_degree_; }
  std::size_t prime_count() const { return primes_.size(); }
  std::size_t max_level() const { return primes_.size() - 1; }
  const std::vector<NttPrime>& primes() const { return primes_; }
  std::uint64_t modulus(std::size_t i) const { return primes_[i].value; }
  const NttTables& ntt(std::size_t i) const { return tables_[i]; }

 private:
  RingContext(std::size_t degree, std::vector<NttPrime> primes);

  std::size_t degree_;
  int log_degree_;
  std::vector<NttPrime> primes_;
  std::vector<NttTables> tables_;
};

}  // namespace hecredit::ring

#endif  // HECREDIT_RING_RING_CONTEXT_H_

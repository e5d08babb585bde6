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

#include "keyswitch.h"

#include <vector>

#include "hecredit/common/error.h"
#include "hecredit/ring/modulus.h"

namespace hecredit::ckks {

using ring::RnsPoly;

KeySwitchKey MakeKeySwitchKey(const RnsPoly& target, const RnsPoly& secret,
                              std::span<const PublicContext::Digit> digits, ring::RandomSource& rng) {
  const auto& ctx = secret.shared_context();
  const std::size_t full = secret.level();
  const std::size_t special = full;
  const std::uint64_t p = ctx->modulus(special);
  KeySwitchKey key;
  for (const auto& d : digits) {
    RnsPoly a = ring::SampleUniform(ctx, full, rng, ring::PolyForm::kNtt);
    RnsPoly e = ring::NttForward(ring::SampleGaussian(ctx, full, ring::kDefaultNoiseStddev, rng));
    RnsPoly b = ring::Add(ring::Negate(ring::Multiply(a, secret)), e);
    // Gadget factor P * 2^shift lives only on the digit's own prime.
    const std::size_t i = d.prime_index;
    const std::uint64_t qi = ctx->modulus(i);
    const std::uint64_t factor = ring::MulMod(p % qi, ring::PowMod(2, d.shift_bits, qi), qi);
    auto bi = b.residue(i);
    auto ti = target.residue(i);
    for (std::size_t k = 0; k < bi.size(); ++k) bi[k] = ring::AddMod(bi[k], ring::MulMod(factor, ti[k], qi), qi);
    key.b.push_back(std::move(b));
    key.a.push_back(std::move(a));
  }
  return key;
}

std::pair<RnsPoly, RnsPoly> SwitchKey(const RnsPoly& c, const KeySwitchKey& key,
                                      std::span<const PublicContext::Digit> digits) {
  if (c.is_ntt()) throw Error(ErrorCode::kInvalidArgument, "key switching expects coefficient form");
  const auto& ctx = c.shared_context();
  const std::size_t n = c.degree();
  const std::size_t level = c.level();
  const std::size_t special = ctx->prime_count() - 1;
  if (level >= special) throw Error(ErrorCode::kOutOfRange, "ciphertext level reaches the special prime");

  // Target primes: the ciphertext's primes followed by the special prime.
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i <= level; ++i) targets.push_back(i);
  targets.push_back(special);
  const std::size_t t_count = targets.size();
  std::vector<std::uint64_t> acc0(t_count * n, 0), acc1(t_count * n, 0);
  std::vector<std::int64_t> remainder(n);
  std::vector<std::int64_t> digit(n);
  std::vector<std::uint64_t> lifted(n);

  for (std::size_t d = 0; d < digits.size(); ++d) {
    const auto& dig = digits[d];
    if (dig.prime_index > level) continue;
    const std::uint64_t qd = ctx->modulus(dig.prime_index);
    const bool first = d == 0 || digits[d - 1].prime_index != dig.prime_index;
    const bool last = d + 1 == digits.size() || digits[d + 1].prime_index != dig.prime_index;
    if (first) {
      auto src = c.residue(dig.prime_index);
      for (std::size_t k = 0; k < n; ++k) remainder[k] = ring::Centered(src[k], qd);
    }
    const int width = last ? 0 : digits[d + 1].shift_bits - dig.shift_bits;
    for (std::size_t k = 0; k < n; ++k) {
      if (last) {
        digit[k] = remainder[k];
      } else {
        // Balanced digit in [-2^(w-1), 2^(w-1)).
        const std::int64_t base = std::int64_t{1} << width;
        std::int64_t v = remainder[k] & (base - 1);
        if (v >= base / 2) v -= base;
        digit[k] = v;
        remainder[k] = (remainder[k] - v) >> width;
      }
    }
    for (std::size_t t = 0; t < t_count; ++t) {
      const std::size_t prime = targets[t];
      const std::uint64_t q = ctx->modulus(prime);
      for (std::size_t k = 0; k < n; ++k) lifted[k] = ring::ReduceSigned(digit[k], q);
      ctx->ntt(prime).Forward(lifted);
      auto kb = key.b[d].residue(prime);
      auto ka = key.a[d].residue(prime);
      std::uint64_t* a0 = acc0.data() + t * n;
      std::uint64_t* a1 = acc1.data() + t * n;
      for (std::size_t k = 0; k < n; ++k) {
        a0[k] = ring::AddMod(a0[k], ring::MulMod(lifted[k], kb[k], q), q);
        a1[k] = ring::AddMod(a1[k], ring::MulMod(lifted[k], ka[k], q), q);
      }
    }
  }

  // Back to coefficients, then divide by the special prime with rounding.
  for (std::size_t t = 0; t < t_count; ++t) {
    const auto& tables = ctx->ntt(targets[t]);
    tables.Inverse({acc0.data() + t * n, n});
    tables.Inverse({acc1.data() + t * n, n});
  }
  const std::uint64_t p = ctx->modulus(special);
  const std::uint64_t half_p = p / 2;
  RnsPoly k0(ctx, level), k1(ctx, level);
  const std::uint64_t* p0 = acc0.data() + level * n + n;
  const std::uint64_t* p1 = acc1.data() + level * n + n;
  std::vector<std::uint64_t> y0(n), y1(n);
  for (std::size_t k = 0; k < n; ++k) {
    y0[k] = ring::AddMod(p0[k], half_p, p);
    y1[k] = ring::AddMod(p1[k], half_p, p);
  }
  for (std::size_t i = 0; i <= level; ++i) {
    const std::uint64_t q = ctx->modulus(i);
    const std::uint64_t p_inv = ring::InvMod(p % q, q);
    const std::uint64_t half_mod = half_p % q;
    const std::uint64_t* a0 = acc0.data() + i * n;
    const std::uint64_t* a1 = acc1.data() + i * n;
    auto r0 = k0.residue(i);
    auto r1 = k1.residue(i);
    for (std::size_t k = 0; k < n; ++k) {
      std::uint64_t v0 = ring::SubMod(ring::AddMod(a0[k], half_mod, q), y0[k] % q, q);
      std::uint64_t v1 = ring::SubMod(ring::AddMod(a1[k], half_mod, q), y1[k] % q, q);
      r0[k] = ring::MulMod(v0, p_inv, q);
      r1[k] = ring::MulMod(v1, p_inv, q);
    }
  }
  return {std::move(k0), std::move(k1)};
}

}  // namespace hecredit::ckks

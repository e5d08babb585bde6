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

#include "hecredit/ckks/context.h"

#include <bit>

#include "keyswitch.h"
#include "hecredit/common/error.h"
#include "hecredit/ring/modulus.h"

namespace hecredit::ckks {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

void FnvMix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
}

}  // namespace

std::vector<PublicContext::Digit> DigitLayout(const SecurityParams& params) {
  std::vector<PublicContext::Digit> out;
  const int width = params.keyswitch_digit_bits;
  for (std::size_t i = 0; i + 1 < params.coeff_bit_sizes.size(); ++i) {
    const int bits = params.coeff_bit_sizes[i];
    const int count = (width == 0 || width >= bits) ? 1 : (bits + width - 1) / width;
    for (int d = 0; d < count; ++d) out.push_back({i, d * width});
  }
  return out;
}

std::uint64_t ParamsFingerprint(const SecurityParams& params) {
  std::uint64_t h = kFnvOffset;
  FnvMix(h, params.poly_degree);
  FnvMix(h, params.coeff_bit_sizes.size());
  for (int b : params.coeff_bit_sizes) FnvMix(h, static_cast<std::uint64_t>(b));
  FnvMix(h, static_cast<std::uint64_t>(params.scale_bits));
  FnvMix(h, params.rotation_steps.size());
  for (int s : params.rotation_steps) FnvMix(h, static_cast<std::uint64_t>(s));
  FnvMix(h, static_cast<std::uint64_t>(params.keyswitch_digit_bits));
  return h;
}

PublicContext::PublicContext(SecurityParams params, std::shared_ptr<const ring::RingContext> ring,
                             ring::RnsPoly pk_b, ring::RnsPoly pk_a, std::map<int, GaloisKey> galois_keys)
    : params_(std::move(params)),
      ring_(std::move(ring)),
      encoder_(ring_),
      pk_b_(std::move(pk_b)),
      pk_a_(std::move(pk_a)),
      galois_keys_(std::move(galois_keys)),
      digits_(DigitLayout(params_)),
      fingerprint_(ParamsFingerprint(params_)) {}

const GaloisKey* PublicContext::FindGaloisKey(int step) const {
  auto it = galois_keys_.find(step);
  return it == galois_keys_.end() ? nullptr : &it->second;
}

PrivateContext::PrivateContext(std::shared_ptr<const PublicContext> pub, ring::RnsPoly secret)
    : public_(std::move(pub)), secret_(std::move(secret)) {}

std::shared_ptr<const ring::RingContext> MakeRing(const SecurityParams& params) {
  params.Validate();
  auto primes = ring::GenerateNttPrimes(params.poly_degree, params.coeff_bit_sizes);
  return ring::RingContext::Create(params.poly_degree, std::move(primes));
}

std::shared_ptr<const PrivateContext> KeyGen(const SecurityParams& params, ring::RandomSource& rng) {
  auto ring = MakeRing(params);
  const std::size_t full = ring->prime_count() - 1;
  ring::RnsPoly s = ring::SampleTernary(ring, full, rng);
  ring::RnsPoly s_ntt = ring::NttForward(s);

  ring::RnsPoly pk_a = ring::SampleUniform(ring, full, rng, ring::PolyForm::kNtt);
  ring::RnsPoly e = ring::NttForward(ring::SampleGaussian(ring, full, ring::kDefaultNoiseStddev, rng));
  ring::RnsPoly pk_b = ring::Add(ring::Negate(ring::Multiply(pk_a, s_ntt)), e);

  const auto digits = DigitLayout(params);
  const std::size_t two_n = 2 * params.poly_degree;
  std::map<int, GaloisKey> galois;
  for (int step : params.rotation_steps) {
    GaloisKey gk;
    gk.step = step;
    gk.galois_element = static_cast<std::size_t>(ring::PowMod(5, static_cast<std::uint64_t>(step), two_n));
    ring::RnsPoly target = ring::NttForward(ring::ApplyAutomorphism(s, gk.galois_element));
    gk.key = MakeKeySwitchKey(target, s_ntt, digits, rng);
    galois.emplace(step, std::move(gk));
  }
  auto pub = std::make_shared<const PublicContext>(params, ring, std::move(pk_b), std::move(pk_a),
                                                   std::move(galois));
  return std::make_shared<const PrivateContext>(std::move(pub), std::move(s_ntt));
}

}  // namespace hecredit::ckks

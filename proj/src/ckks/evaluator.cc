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

#include "hecredit/ckks/evaluator.h"

#include <cmath>
#include <optional>
#include <random>
#include <string>

#include "hecredit/common/error.h"
#include "keyswitch.h"

namespace hecredit::ckks {

using ring::RnsPoly;

namespace {

void RequireSameLevel(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kLevelMismatch,
                "operand levels differ: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

void RequireSameScale(double a, double b) {
  if (!ScalesMatch(a, b)) {
    throw Error(ErrorCode::kScaleMismatch, "operand scales differ: " + std::to_string(a) + " vs " +
                                               std::to_string(b));
  }
}

RnsPoly AsCoefficient(const RnsPoly& p) { return p.is_ntt() ? ring::NttInverse(p) : p; }

}  // namespace

bool ScalesMatch(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

Ciphertext Encrypt(const Plaintext& pt, const PublicContext& pub, ring::RandomSource& rng) {
  RequireSameLevel(pt.level(), pub.top_level());
  const auto& ctx = pub.ring();
  const std::size_t full = ctx->prime_count() - 1;
  RnsPoly u = ring::NttForward(ring::SampleTernary(ctx, full, rng));
  RnsPoly e0 = ring::SampleGaussian(ctx, full, ring::kDefaultNoiseStddev, rng);
  RnsPoly e1 = ring::SampleGaussian(ctx, full, ring::kDefaultNoiseStddev, rng);
  // Encrypt zero modulo QP, then divide by P: the key noise shrinks by P.
  RnsPoly c0 = ring::Add(ring::NttInverse(ring::Multiply(pub.pk_b(), u)), e0);
  RnsPoly c1 = ring::Add(ring::NttInverse(ring::Multiply(pub.pk_a(), u)), e1);
  c0 = ring::DropLastPrime(c0);
  c1 = ring::DropLastPrime(c1);
  c0 = ring::Add(c0, AsCoefficient(pt.poly));
  return Ciphertext{std::move(c0), std::move(c1), pt.scale};
}

Ciphertext EncryptSymmetric(const Plaintext& pt, const PrivateContext& priv, ring::RandomSource& rng) {
  const PublicContext& pub = *priv.public_context();
  RequireSameLevel(pt.level(), pub.top_level());
  const auto& ctx = pub.ring();
  const std::size_t level = pt.level();
  RnsPoly a = ring::SampleUniform(ctx, level, rng);
  RnsPoly e = ring::SampleGaussian(ctx, level, ring::kDefaultNoiseStddev, rng);
  RnsPoly s = ring::TruncateToLevel(priv.secret_key(), level);
  RnsPoly as = ring::NttInverse(ring::Multiply(ring::NttForward(a), s));
  RnsPoly c0 = ring::Add(ring::Sub(e, as), AsCoefficient(pt.poly));
  return Ciphertext{std::move(c0), std::move(a), pt.scale};
}

Plaintext Decrypt(const Ciphertext& ct, const PrivateContext& priv, const DecryptOptions& options) {
  const PublicContext& pub = *priv.public_context();
  if (ct.c0.context().primes() != pub.ring()->primes() || ct.c1.context().primes() != pub.ring()->primes()) {
    throw Error(ErrorCode::kInconsistent, "ciphertext was produced under different parameters");
  }
  RequireSameLevel(ct.c0.level(), ct.c1.level());
  if (ct.level() > pub.top_level()) throw Error(ErrorCode::kOutOfRange, "ciphertext level above data chain");
  const std::size_t level = ct.level();
  RnsPoly s = ring::TruncateToLevel(priv.secret_key(), level);
  RnsPoly c1s = ring::NttInverse(ring::Multiply(ring::NttForward(AsCoefficient(ct.c1)), s));
  RnsPoly m = ring::Add(AsCoefficient(ct.c0), c1s);
  if (options.flood) {
    const std::size_t n = pub.params().poly_degree;
    // Per-slot stddev of decoded values is sigma * sqrt(N/2) / scale.
    const double sigma = options.flood_slot_stddev * ct.scale / std::sqrt(static_cast<double>(n) / 2.0);
    std::optional<ring::RandomSource> system;
    if (options.rng == nullptr) system.emplace(ring::RandomSource::FromSystem());
    ring::RandomSource& rng = options.rng ? *options.rng : *system;
    std::normal_distribution<double> dist(0.0, sigma);
    std::vector<std::int64_t> noise(n);
    for (auto& v : noise) v = static_cast<std::int64_t>(std::llround(dist(rng)));
    m = ring::Add(m, RnsPoly::FromSigned(pub.ring(), level, noise));
  }
  return Plaintext{std::move(m), ct.scale};
}

Ciphertext AddCt(const Ciphertext& a, const Ciphertext& b) {
  RequireSameLevel(a.level(), b.level());
  RequireSameScale(a.scale, b.scale);
  return Ciphertext{ring::Add(a.c0, b.c0), ring::Add(a.c1, b.c1), a.scale};
}

Ciphertext AddPlain(const Ciphertext& a, const Plaintext& p) {
  RequireSameLevel(a.level(), p.level());
  RequireSameScale(a.scale, p.scale);
  return Ciphertext{ring::Add(a.c0, AsCoefficient(p.poly)), a.c1, a.scale};
}

Ciphertext MulPlain(const Ciphertext& a, const Plaintext& p) {
  RequireSameLevel(a.level(), p.level());
  RnsPoly pn = p.poly.is_ntt() ? p.poly : ring::NttForward(p.poly);
  RnsPoly c0 = ring::NttInverse(ring::Multiply(ring::NttForward(a.c0), pn));
  RnsPoly c1 = ring::NttInverse(ring::Multiply(ring::NttForward(a.c1), pn));
  return Ciphertext{std::move(c0), std::move(c1), a.scale * p.scale};
}

Ciphertext Rescale(const Ciphertext& a) {
  if (a.level() == 0) throw Error(ErrorCode::kOutOfRange, "cannot rescale at the bottom of the chain");
  const double q = static_cast<double>(a.c0.context().modulus(a.level()));
  return Ciphertext{ring::DropLastPrime(a.c0), ring::DropLastPrime(a.c1), a.scale / q};
}

Ciphertext Rotate(const Ciphertext& a, int step, const PublicContext& pub) {
  const GaloisKey* gk = pub.FindGaloisKey(step);
  if (gk == nullptr) throw Error(ErrorCode::kMissingKey, "no Galois key for rotation step " + std::to_string(step));
  RnsPoly c0 = ring::ApplyAutomorphism(a.c0, gk->galois_element);
  RnsPoly c1 = ring::ApplyAutomorphism(a.c1, gk->galois_element);
  auto [k0, k1] = SwitchKey(c1, gk->key, pub.digits());
  return Ciphertext{ring::Add(c0, k0), std::move(k1), a.scale};
}

Ciphertext SumSlots(const Ciphertext& a, std::size_t width, const PublicContext& pub) {
  if (width == 0 || width > pub.slot_count()) {
    throw Error(ErrorCode::kInvalidArgument, "sum width out of range: " + std::to_string(width));
  }
  Ciphertext acc = a;
  for (std::size_t step = 1; step < width; step <<= 1) {
    acc = AddCt(acc, Rotate(acc, static_cast<int>(step), pub));
  }
  return acc;
}

}  // namespace hecredit::ckks

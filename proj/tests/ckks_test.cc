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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hecredit/ckks/context.h"
#include "hecredit/ckks/encoder.h"
#include "hecredit/ckks/evaluator.h"
#include "hecredit/ckks/params.h"
#include "hecredit/ckks/serialize.h"
#include "hecredit/common/error.h"
#include "hecredit/ring/modulus.h"

namespace hecredit::ckks {
namespace {

using ring::RandomSource;

std::vector<double> UniformVector(std::size_t n, double lo, double hi, RandomSource& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

double MaxAbsDiff(const std::vector<double>& got, const std::vector<double>& want, std::size_t n) {
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double expected = i < want.size() ? want[i] : 0.0;
    worst = std::max(worst, std::abs(got[i] - expected));
  }
  return worst;
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInternal;
}

class CkksTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    auto rng = RandomSource::FromSeed(2024);
    priv_ = KeyGen(SecurityParams::Standard(), rng);
  }
  static void TearDownTestSuite() { priv_.reset(); }

  const PublicContext& pub() const { return *priv_->public_context(); }
  const PrivateContext& priv() const { return *priv_; }
  double delta() const { return pub().default_scale(); }

  Ciphertext Enc(const std::vector<double>& v) {
    return EncryptSymmetric(pub().encoder().Encode(v, delta(), pub().top_level()), priv(), rng_);
  }
  Plaintext Plain(const std::vector<double>& v, double scale, std::size_t level) const {
    return pub().encoder().Encode(v, scale, level);
  }
  std::vector<double> Dec(const Ciphertext& ct, bool flood = false) {
    DecryptOptions opt;
    opt.flood = flood;
    opt.rng = &rng_;
    return pub().encoder().Decode(Decrypt(ct, priv(), opt));
  }

  static std::shared_ptr<const PrivateContext> priv_;
  RandomSource rng_ = RandomSource::FromSeed(77);
};

std::shared_ptr<const PrivateContext> CkksTest::priv_;

TEST(ParamsTest, StandardShape) {
  auto p = SecurityParams::Standard();
  EXPECT_EQ(p.poly_degree, 4096u);
  EXPECT_EQ(p.slot_count(), 2048u);
  EXPECT_EQ(p.top_level(), 1u);
  EXPECT_EQ(p.scale(), 1048576.0);
  EXPECT_NO_THROW(p.Validate());
  auto ring = MakeRing(p);
  EXPECT_EQ(ring->prime_count(), 3u);
}

TEST(ParamsTest, HighSecurityShape) {
  auto p = SecurityParams::HighSecurity();
  EXPECT_NO_THROW(p.Validate());
  auto ring = MakeRing(p);
  EXPECT_EQ(ring->prime_count(), 7u);
  EXPECT_EQ(p.slot_count(), 4096u);
}

TEST(ParamsTest, InvalidParamsAreRejected) {
  auto p = SecurityParams::Standard();
  p.poly_degree = 3000;
  EXPECT_EQ(CodeOf([&] { p.Validate(); }), ErrorCode::kInvalidArgument);
  p = SecurityParams::Standard();
  p.coeff_bit_sizes = {40};
  EXPECT_EQ(CodeOf([&] { p.Validate(); }), ErrorCode::kInvalidArgument);
  p = SecurityParams::Standard();
  p.rotation_steps = {0};
  EXPECT_EQ(CodeOf([&] { p.Validate(); }), ErrorCode::kInvalidArgument);
  p = SecurityParams::Standard();
  p.coeff_bit_sizes = {40, 6, 40};  // no 6-bit prime is 1 mod 8192
  auto rng = RandomSource::FromSeed(1);
  EXPECT_EQ(CodeOf([&] { KeyGen(p, rng); }), ErrorCode::kInvalidArgument);
}

// Independent oracle: evaluate the encoded polynomial directly at the slot
// roots zeta^(5^j) in long double and compare with the inputs.
TEST(EncoderTest, MatchesDirectCanonicalEmbedding) {
  const std::size_t n = 16;
  const std::vector<int> bits = {30, 30};
  auto ring = ring::RingContext::Create(n, ring::GenerateNttPrimes(n, bits));
  Encoder enc(ring);
  auto rng = RandomSource::FromSeed(3);
  auto values = UniformVector(n / 2, -4, 4, rng);
  const double scale = 1 << 16;
  auto pt = enc.Encode(values, scale, 0);
  auto coeffs = ring::ToCenteredDoubles(pt.poly);
  const long double pi = std::numbers::pi_v<long double>;
  std::size_t g = 1;
  for (std::size_t j = 0; j < n / 2; ++j) {
    std::complex<long double> acc = 0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += static_cast<long double>(coeffs[k]) * std::polar(1.0L, pi * static_cast<long double>(g * k) / n);
    }
    EXPECT_NEAR(static_cast<double>(acc.real() / scale), values[j], 1e-3) << "slot " << j;
    EXPECT_NEAR(static_cast<double>(acc.imag() / scale), 0.0, 1e-3) << "slot " << j;
    g = (g * 5) % (2 * n);
  }
}

TEST_F(CkksTest, EncodeDecodeExamples) {
  const auto& enc = pub().encoder();
  std::vector<double> zeros(2048, 0.0);
  EXPECT_LT(MaxAbsDiff(enc.Decode(enc.Encode(zeros, delta(), 1)), zeros, 2048), 1e-6);
  std::vector<double> small = {1.5, -2.25, 0.125};
  EXPECT_LE(MaxAbsDiff(enc.Decode(enc.Encode(small, delta(), 1)), small, 2048), 1e-3);
  auto rng = RandomSource::FromSeed(4);
  auto full = UniformVector(2048, -10, 10, rng);
  EXPECT_LE(MaxAbsDiff(enc.Decode(enc.Encode(full, delta(), 1)), full, 2048), 1e-3);
}

TEST_F(CkksTest, EncodeRejectsBadInput) {
  const auto& enc = pub().encoder();
  std::vector<double> too_long(2049, 1.0);
  EXPECT_EQ(CodeOf([&] { enc.Encode(too_long, delta(), 1); }), ErrorCode::kInvalidArgument);
  std::vector<double> nan = {1.0, std::nan("")};
  EXPECT_EQ(CodeOf([&] { enc.Encode(nan, delta(), 1); }), ErrorCode::kInvalidArgument);
  std::vector<double> inf = {INFINITY};
  EXPECT_EQ(CodeOf([&] { enc.Encode(inf, delta(), 1); }), ErrorCode::kInvalidArgument);
}

TEST_F(CkksTest, PublicKeyRelationHolds) {
  // b + a*s must be the small key error.
  auto s = priv().secret_key();
  auto e = ring::NttInverse(ring::Add(pub().pk_b(), ring::Multiply(pub().pk_a(), s)));
  double worst = 0;
  for (double c : ring::ToCenteredDoubles(e)) worst = std::max(worst, std::abs(c));
  EXPECT_LE(worst, 6 * ring::kDefaultNoiseStddev);
}

TEST_F(CkksTest, KeyGenIsDeterministicUnderSeed) {
  auto p = SecurityParams::Standard();
  auto r1 = RandomSource::FromSeed(5), r2 = RandomSource::FromSeed(5), r3 = RandomSource::FromSeed(6);
  auto a = SerializePublic(*KeyGen(p, r1)->public_context());
  auto b = SerializePublic(*KeyGen(p, r2)->public_context());
  auto c = SerializePublic(*KeyGen(p, r3)->public_context());
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST_F(CkksTest, SymmetricEncryptionOfZerosIsTight) {
  std::vector<double> zeros(2048, 0.0);
  EXPECT_LE(MaxAbsDiff(Dec(Enc(zeros)), zeros, 2048), 1e-3);
}

TEST_F(CkksTest, PublicKeyEncryptionRoundTrip) {
  // Rounding by the special prime leaves about 6.5e-4 per-slot noise at
  // Delta = 2^20, so the all-slot maximum is checked against 5e-3.
  auto rng = RandomSource::FromSeed(8);
  auto v = UniformVector(2048, -10, 10, rng);
  auto ct = Encrypt(Plain(v, delta(), 1), pub(), rng);
  auto got = Dec(ct);
  EXPECT_LE(MaxAbsDiff(got, v, 2048), 5e-3);
  double sq = 0;
  for (std::size_t i = 0; i < 2048; ++i) sq += (got[i] - v[i]) * (got[i] - v[i]);
  EXPECT_LE(std::sqrt(sq / 2048), 1e-3);
}

TEST_F(CkksTest, EncryptionIsRandomized) {
  std::vector<double> v = {0.5, -1.0, 3.0};
  auto a = Enc(v), b = Enc(v);
  EXPECT_NE(SerializeCiphertext(a, pub()), SerializeCiphertext(b, pub()));
  EXPECT_LE(MaxAbsDiff(Dec(a), Dec(b), 2048), 2e-3);
  auto rng = RandomSource::FromSeed(9);
  auto pa = Encrypt(Plain(v, delta(), 1), pub(), rng);
  auto pb = Encrypt(Plain(v, delta(), 1), pub(), rng);
  EXPECT_FALSE(pa.c0 == pb.c0);
}

TEST_F(CkksTest, EncryptRequiresTopLevel) {
  auto pt = Plain({1.0}, delta(), 0);
  auto rng = RandomSource::FromSeed(10);
  EXPECT_EQ(CodeOf([&] { Encrypt(pt, pub(), rng); }), ErrorCode::kLevelMismatch);
  EXPECT_EQ(CodeOf([&] { EncryptSymmetric(pt, priv(), rng); }), ErrorCode::kLevelMismatch);
}

TEST_F(CkksTest, TwentySixFeatureRowRoundTrip) {
  auto rng = RandomSource::FromSeed(11);
  std::normal_distribution<double> dist(0.0, 1.5);
  std::vector<double> row(26);
  for (auto& x : row) x = dist(rng);
  EXPECT_LE(MaxAbsDiff(Dec(Enc(row)), row, 26), 1e-3);
}

TEST_F(CkksTest, FloodingPerturbsButPreservesDecisions) {
  auto rng = RandomSource::FromSeed(12);
  auto v = UniformVector(2048, -3, 3, rng);
  auto ct = Enc(v);
  auto off = Dec(ct, false);
  auto on = Dec(ct, true);
  EXPECT_LE(MaxAbsDiff(on, off, 2048), 1e-2);
  EXPECT_GT(MaxAbsDiff(on, off, 2048), 0.0);
  for (std::size_t i = 0; i < 2048; ++i) {
    if (std::abs(v[i]) > 0.05) {
      EXPECT_EQ(on[i] > 0, v[i] > 0) << i;
    }
  }
  // Default options flood with a system source.
  auto d1 = pub().encoder().Decode(Decrypt(ct, priv()));
  EXPECT_LE(MaxAbsDiff(d1, v, 2048), 1e-2);
}

TEST_F(CkksTest, DecryptRejectsForeignCiphertext) {
  auto p = SecurityParams::Standard();
  p.coeff_bit_sizes = {40, 21, 40};
  p.scale_bits = 21;
  auto rng = RandomSource::FromSeed(13);
  auto other = KeyGen(p, rng);
  auto ct = EncryptSymmetric(other->public_context()->encoder().Encode(std::vector<double>{1.0}, p.scale(), 1),
                             *other, rng);
  EXPECT_EQ(CodeOf([&] { Decrypt(ct, priv()); }), ErrorCode::kInconsistent);
}

TEST_F(CkksTest, AdditionExamples) {
  std::vector<double> x = {1, 2}, y = {3, 4};
  EXPECT_LE(MaxAbsDiff(Dec(AddCt(Enc(x), Enc(y))), {4, 6}, 2048), 2e-3);
  auto ct = Enc(x);
  EXPECT_LE(MaxAbsDiff(Dec(AddCt(ct, Enc({}))), x, 2048), 2e-3);
  EXPECT_LE(MaxAbsDiff(Dec(AddPlain(ct, Plain({-1, -2}, delta(), 1))), {}, 2048), 2e-3);
}

TEST_F(CkksTest, AdditionRejectsMismatches) {
  auto a = Enc({1.0});
  auto b = Rescale(MulPlain(Enc({1.0}), Plain({1.0}, delta(), 1)));
  EXPECT_EQ(CodeOf([&] { AddCt(a, b); }), ErrorCode::kLevelMismatch);
  EXPECT_EQ(CodeOf([&] { AddPlain(a, Plain({1.0}, 2 * delta(), 1)); }), ErrorCode::kScaleMismatch);
  EXPECT_EQ(CodeOf([&] { AddPlain(a, Plain({1.0}, delta(), 0)); }), ErrorCode::kLevelMismatch);
  EXPECT_EQ(CodeOf([&] { MulPlain(a, Plain({1.0}, delta(), 0)); }), ErrorCode::kLevelMismatch);
}

TEST_F(CkksTest, PlainMultiplicationExamples) {
  auto ct = Enc({1, 2, 3});
  auto prod = MulPlain(ct, Plain({2, 2, 2}, delta(), 1));
  EXPECT_EQ(prod.scale, delta() * delta());
  EXPECT_LE(MaxAbsDiff(Dec(Rescale(prod)), {2, 4, 6}, 2048), 1e-2);
  std::vector<double> ones(2048, 1.0);
  EXPECT_LE(MaxAbsDiff(Dec(Rescale(MulPlain(ct, Plain(ones, delta(), 1)))), {1, 2, 3}, 2048), 1e-2);
  EXPECT_LE(MaxAbsDiff(Dec(Rescale(MulPlain(ct, Plain({}, delta(), 1)))), {}, 2048), 1e-2);
}

TEST_F(CkksTest, RescaleBookkeeping) {
  auto ct = MulPlain(Enc({}), Plain(std::vector<double>(2048, 1.0), delta(), 1));
  auto r = Rescale(ct);
  const double q1 = static_cast<double>(pub().ring()->modulus(1));
  EXPECT_EQ(r.level(), 0u);
  EXPECT_EQ(r.scale, delta() * delta() / q1);
  EXPECT_NEAR(std::log2(r.scale), 20.0, 0.05);
  EXPECT_LE(MaxAbsDiff(Dec(r), {}, 2048), 1e-2);
  auto dec = Decrypt(r, priv(), {.flood = true, .rng = &rng_});
  EXPECT_EQ(dec.scale, r.scale);
  EXPECT_EQ(CodeOf([&] { Rescale(r); }), ErrorCode::kOutOfRange);
}

TEST_F(CkksTest, RescalePreservesValues) {
  auto rng = RandomSource::FromSeed(14);
  auto v = UniformVector(2048, -10, 10, rng);
  auto ct = MulPlain(Enc(v), Plain(std::vector<double>(2048, 1.0), delta(), 1));
  EXPECT_LE(MaxAbsDiff(Dec(Rescale(ct)), Dec(ct), 2048), 1e-2);
}

TEST_F(CkksTest, RotationExamples) {
  std::vector<double> v = {1, 2, 3};
  auto r1 = Dec(Rotate(Enc(v), 1, pub()));
  std::vector<double> want(2048, 0.0);
  want[0] = 2;
  want[1] = 3;
  want[2047] = 1;
  EXPECT_LE(MaxAbsDiff(r1, want, 2048), 1e-2);

  std::vector<double> constant(2048, 2.5);
  for (int step : {1, 4, 16}) EXPECT_LE(MaxAbsDiff(Dec(Rotate(Enc(constant), step, pub())), constant, 2048), 1e-2);

  auto rng = RandomSource::FromSeed(15);
  auto u = UniformVector(2048, -5, 5, rng);
  auto r3 = Dec(Rotate(Rotate(Enc(u), 1, pub()), 2, pub()));
  std::vector<double> shifted(2048);
  for (std::size_t i = 0; i < 2048; ++i) shifted[i] = u[(i + 3) % 2048];
  EXPECT_LE(MaxAbsDiff(r3, shifted, 2048), 1e-2);
}

TEST_F(CkksTest, RotationRequiresScheduledKey) {
  auto ct = Enc({1.0});
  EXPECT_EQ(CodeOf([&] { Rotate(ct, 0, pub()); }), ErrorCode::kMissingKey);
  EXPECT_EQ(CodeOf([&] { Rotate(ct, 3, pub()); }), ErrorCode::kMissingKey);
  EXPECT_EQ(CodeOf([&] { SumSlots(ct, 33, pub()); }), ErrorCode::kMissingKey);
  EXPECT_EQ(CodeOf([&] { SumSlots(ct, 0, pub()); }), ErrorCode::kInvalidArgument);
}

TEST_F(CkksTest, RotationGroupActionProperty) {
  auto rng = RandomSource::FromSeed(16);
  for (int step : {1, 2, 4, 8, 16}) {
    auto v = UniformVector(2048, -10, 10, rng);
    auto got = Dec(Rotate(Enc(v), step, pub()));
    std::vector<double> back(2048);
    for (std::size_t i = 0; i < 2048; ++i) back[(i + step) % 2048] = got[i];
    EXPECT_LE(MaxAbsDiff(back, v, 2048), 1e-2) << "step " << step;
  }
}

TEST_F(CkksTest, SumSlotsExamples) {
  EXPECT_NEAR(Dec(SumSlots(Enc({5}), 1, pub()))[0], 5.0, 1e-2);
  EXPECT_NEAR(Dec(SumSlots(Enc(std::vector<double>(26, 1.0)), 26, pub()))[0], 26.0, 5e-2);
  auto rng = RandomSource::FromSeed(17);
  auto v = UniformVector(26, -10, 10, rng);
  double sum = 0;
  for (double x : v) sum += x;
  EXPECT_NEAR(Dec(SumSlots(Enc(v), 26, pub()))[0], sum, 5e-2);
}

TEST_F(CkksTest, AdditionHomomorphismProperty) {
  auto rng = RandomSource::FromSeed(18);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto x = UniformVector(26, -100, 100, rng);
    auto y = UniformVector(26, -100, 100, rng);
    auto got = Dec(AddCt(Enc(x), Enc(y)));
    for (std::size_t i = 0; i < 26; ++i) worst = std::max(worst, std::abs(got[i] - (x[i] + y[i])));
  }
  EXPECT_LE(worst, 1e-2);
}

// Encrypted inputs up to 100, plaintext factors up to 10. The decoded error is
// about 1.4e-4 * |w| per slot at Delta = 2^20, so larger factors exceed 1e-2.
TEST_F(CkksTest, PlainMultiplicationHomomorphismProperty) {
  auto rng = RandomSource::FromSeed(19);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto x = UniformVector(26, -100, 100, rng);
    auto w = UniformVector(26, -10, 10, rng);
    auto got = Dec(Rescale(MulPlain(Enc(x), Plain(w, delta(), 1))));
    for (std::size_t i = 0; i < 26; ++i) worst = std::max(worst, std::abs(got[i] - x[i] * w[i]));
  }
  EXPECT_LE(worst, 1e-2);
}

// The deployed circuit: multiply, sum at the doubled scale, rescale, add bias.
TEST_F(CkksTest, LinearFormProperty) {
  auto rng = RandomSource::FromSeed(20);
  std::normal_distribution<double> feature(0.0, 1.0);
  std::uniform_real_distribution<double> weight(-2.0, 2.0);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(26), w(26);
    for (auto& v : x) v = feature(rng);
    for (auto& v : w) v = weight(rng);
    const double b = weight(rng);
    auto ct = SumSlots(MulPlain(Enc(x), Plain(w, delta(), 1)), 26, pub());
    ct = Rescale(ct);
    ct = AddPlain(ct, Plain({b}, ct.scale, ct.level()));
    double want = b;
    for (int i = 0; i < 26; ++i) want += w[i] * x[i];
    worst = std::max(worst, std::abs(Dec(ct, true)[0] - want));
  }
  EXPECT_LE(worst, 1e-2);
}

TEST_F(CkksTest, PublicContextRoundTrip) {
  auto bytes = SerializePublic(pub());
  auto copy = DeserializePublic(bytes);
  EXPECT_EQ(SerializePublic(*copy), bytes);
  EXPECT_EQ(copy->fingerprint(), pub().fingerprint());
  // Encrypt under the copy, decrypt with the original secret.
  auto rng = RandomSource::FromSeed(21);
  std::vector<double> v = {1.25, -7.5, 3.0};
  auto ct = Encrypt(copy->encoder().Encode(v, delta(), 1), *copy, rng);
  EXPECT_LE(MaxAbsDiff(Dec(ct), v, 3), 5e-3);
  // And evaluate with the copy's Galois keys.
  auto rotated = Rotate(Enc(v), 1, *copy);
  EXPECT_NEAR(Dec(rotated)[0], -7.5, 1e-2);
  std::printf("public context bytes at standard params: %zu (%.2f MB)\n", bytes.size(), bytes.size() / 1e6);
}

TEST_F(CkksTest, CiphertextRoundTrip) {
  auto ct = Enc({1, 2, 3});
  auto bytes = SerializeCiphertext(ct, pub());
  auto back = DeserializeCiphertext(bytes, pub());
  EXPECT_EQ(SerializeCiphertext(back, pub()), bytes);
  EXPECT_EQ(back.scale, ct.scale);
  EXPECT_LE(MaxAbsDiff(Dec(back), {1, 2, 3}, 2048), 1e-3);
  auto low = Rescale(MulPlain(ct, Plain({1, 1, 1}, delta(), 1)));
  auto low_back = DeserializeCiphertext(SerializeCiphertext(low, pub()), pub());
  EXPECT_EQ(low_back.level(), 0u);
  EXPECT_EQ(low_back.scale, low.scale);
}

TEST_F(CkksTest, DeserializeReportsStructuredErrors) {
  auto ct_bytes = SerializeCiphertext(Enc({1}), pub());
  auto bad = ct_bytes;
  bad[0] ^= 0xff;
  EXPECT_EQ(CodeOf([&] { DeserializeCiphertext(bad, pub()); }), ErrorCode::kBadMagic);
  bad = ct_bytes;
  bad[3] = '2';
  EXPECT_EQ(CodeOf([&] { DeserializeCiphertext(bad, pub()); }), ErrorCode::kUnsupportedVersion);
  bad = ct_bytes;
  bad[4] = 1;
  EXPECT_EQ(CodeOf([&] { DeserializeCiphertext(bad, pub()); }), ErrorCode::kInconsistent);
  bad = ct_bytes;
  bad[5] ^= 1;  // fingerprint
  EXPECT_EQ(CodeOf([&] { DeserializeCiphertext(bad, pub()); }), ErrorCode::kInconsistent);
  bad = ct_bytes;
  bad.push_back(0);
  EXPECT_EQ(CodeOf([&] { DeserializeCiphertext(bad, pub()); }), ErrorCode::kInconsistent);
  for (std::size_t len : {0ul, 1ul, 3ul, 5ul, 12ul, 20ul, 30ul, ct_bytes.size() / 2, ct_bytes.size() - 1}) {
    std::span<const std::uint8_t> prefix(ct_bytes.data(), len);
    EXPECT_EQ(CodeOf([&] { DeserializeCiphertext(prefix, pub()); }), ErrorCode::kTruncated) << len;
  }
  auto pub_bytes = SerializePublic(pub());
  auto pbad = pub_bytes;
  pbad[0] = 'X';
  EXPECT_EQ(CodeOf([&] { DeserializePublic(pbad); }), ErrorCode::kBadMagic);
  std::span<const std::uint8_t> half(pub_bytes.data(), pub_bytes.size() / 2);
  EXPECT_EQ(CodeOf([&] { DeserializePublic(half); }), ErrorCode::kTruncated);
  EXPECT_EQ(CodeOf([&] { DeserializePublic(ct_bytes); }), ErrorCode::kInconsistent);
}

TEST_F(CkksTest, RandomCorruptionNeverCrashes) {
  auto ct_bytes = SerializeCiphertext(Enc({1}), pub());
  auto rng = RandomSource::FromSeed(22);
  for (int trial = 0; trial < 300; ++trial) {
    auto bad = ct_bytes;
    const std::size_t pos = rng.UniformBelow(std::min<std::size_t>(bad.size(), trial % 2 ? 64 : bad.size()));
    bad[pos] ^= static_cast<std::uint8_t>(1 + rng.UniformBelow(255));
    if (trial % 3 == 0) bad.resize(rng.UniformBelow(bad.size()));
    try {
      DeserializeCiphertext(bad, pub());
    } catch (const Error&) {
    }
  }
}

TEST_F(CkksTest, PublicBytesNeverContainSecretKey) {
  auto sk = SerializeSecretKey(priv());
  auto pub_bytes = SerializePublic(pub());
  ASSERT_GT(sk.size(), 4096u);
  // Windows of the packed secret polynomial residues.
  for (std::size_t off = sk.size() / 4; off + 32 < sk.size(); off += sk.size() / 8) {
    auto it = std::search(pub_bytes.begin(), pub_bytes.end(), sk.begin() + off, sk.begin() + off + 32);
    EXPECT_EQ(it, pub_bytes.end()) << "window at " << off;
  }
}

}  // namespace
}  // namespace hecredit::ckks

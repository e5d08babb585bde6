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

#include "hecredit/ckks/serialize.h"

#include <cmath>
#include <string>

#include "hecredit/common/error.h"

namespace hecredit::ckks {

using ring::RnsPoly;

namespace {

constexpr char kMagic[] = "HEV";
constexpr std::uint8_t kVersion = '1';

enum class Kind : std::uint8_t { kPublicContext = 1, kCiphertext = 2, kSecretKey = 3 };

[[noreturn]] void Inconsistent(const std::string& what) { throw Error(ErrorCode::kInconsistent, what); }

int ResidueBytes(int bits) { return (bits + 7) / 8; }

void WriteHeader(ByteWriter& w, Kind kind) {
  w.PutTag(kMagic);
  w.PutU8(kVersion);
  w.PutU8(static_cast<std::uint8_t>(kind));
}

void ReadHeader(ByteReader& r, Kind expected) {
  auto magic = r.GetBytes(3);
  if (std::string(magic.begin(), magic.end()) != kMagic) throw Error(ErrorCode::kBadMagic, "not an HEV stream");
  std::uint8_t version = r.GetU8();
  if (version != kVersion) {
    throw Error(ErrorCode::kUnsupportedVersion, "unsupported format version " + std::to_string(version));
  }
  std::uint8_t kind = r.GetU8();
  if (kind != static_cast<std::uint8_t>(expected)) Inconsistent("unexpected object kind " + std::to_string(kind));
}

void WriteParams(ByteWriter& w, const SecurityParams& params, const ring::RingContext& ring) {
  std::size_t at = w.BeginSection();
  w.PutU64(params.poly_degree);
  w.PutU32(static_cast<std::uint32_t>(ring.prime_count()));
  for (const auto& p : ring.primes()) {
    w.PutU32(static_cast<std::uint32_t>(p.bit_size));
    w.PutU64(p.value);
    w.PutU64(p.root);
  }
  w.PutI32(params.scale_bits);
  w.PutU32(static_cast<std::uint32_t>(params.rotation_steps.size()));
  for (int s : params.rotation_steps) w.PutI32(s);
  w.PutI32(params.keyswitch_digit_bits);
  w.FinishSection(at);
}

// Rebuilds the ring from the declared bit sizes and insists the stored primes
// match, so a tampered stream cannot smuggle in a different modulus.
std::pair<SecurityParams, std::shared_ptr<const ring::RingContext>> ReadParams(ByteReader& outer) {
  ByteReader r = outer.GetSection();
  SecurityParams params;
  params.poly_degree = static_cast<std::size_t>(r.GetU64());
  const std::uint32_t count = r.GetU32();
  if (count < 2 || count > 64) Inconsistent("implausible prime count");
  std::vector<ring::NttPrime> stored;
  for (std::uint32_t i = 0; i < count; ++i) {
    ring::NttPrime p;
    p.bit_size = static_cast<int>(r.GetU32());
    p.value = r.GetU64();
    p.root = r.GetU64();
    stored.push_back(p);
    params.coeff_bit_sizes.push_back(p.bit_size);
  }
  params.scale_bits = r.GetI32();
  const std::uint32_t steps = r.GetU32();
  if (steps > 4096) Inconsistent("implausible rotation schedule");
  for (std::uint32_t i = 0; i < steps; ++i) params.rotation_steps.push_back(r.GetI32());
  params.keyswitch_digit_bits = r.GetI32();
  if (!r.done()) Inconsistent("trailing bytes in parameter section");
  std::shared_ptr<const ring::RingContext> ring;
  try {
    ring = MakeRing(params);
  } catch (const Error& e) {
    Inconsistent(std::string("invalid parameters: ") + e.what());
  }
  if (ring->primes() != stored) Inconsistent("stored primes do not match parameters");
  return {std::move(params), std::move(ring)};
}

void WritePoly(ByteWriter& w, const RnsPoly& p) {
  w.PutU8(static_cast<std::uint8_t>(p.form()));
  w.PutU32(static_cast<std::uint32_t>(p.level()));
  for (std::size_t i = 0; i <= p.level(); ++i) {
    const int width = ResidueBytes(p.context().primes()[i].bit_size);
    for (std::uint64_t v : p.residue(i)) w.PutLe(v, width);
  }
}

RnsPoly ReadPoly(ByteReader& r, const std::shared_ptr<const ring::RingContext>& ring) {
  const std::uint8_t form = r.GetU8();
  if (form > 1) Inconsistent("unknown polynomial form");
  const std::uint32_t level = r.GetU32();
  if (level >= ring->prime_count()) Inconsistent("polynomial level exceeds modulus chain");
  RnsPoly p(ring, level, static_cast<ring::PolyForm>(form));
  for (std::size_t i = 0; i <= level; ++i) {
    const auto& prime = ring->primes()[i];
    const int width = ResidueBytes(prime.bit_size);
    auto span = r.GetBytes(p.degree() * static_cast<std::size_t>(width));
    auto dst = p.residue(i);
    for (std::size_t k = 0; k < p.degree(); ++k) {
      std::uint64_t v = 0;
      for (int b = 0; b < width; ++b) v |= std::uint64_t{span[k * width + b]} << (8 * b);
      if (v >= prime.value) Inconsistent("residue not reduced");
      dst[k] = v;
    }
  }
  return p;
}

RnsPoly ReadPolySection(ByteReader& outer, const std::shared_ptr<const ring::RingContext>& ring,
                        std::size_t level, ring::PolyForm form) {
  ByteReader r = outer.GetSection();
  RnsPoly p = ReadPoly(r, ring);
  if (!r.done()) Inconsistent("trailing bytes in polynomial section");
  if (p.level() != level || p.form() != form) Inconsistent("polynomial has unexpected level or form");
  return p;
}

void WritePolySection(ByteWriter& w, const RnsPoly& p) {
  std::size_t at = w.BeginSection();
  WritePoly(w, p);
  w.FinishSection(at);
}

}  // namespace

Bytes SerializePublic(const PublicContext& pub) {
  ByteWriter w;
  WriteHeader(w, Kind::kPublicContext);
  WriteParams(w, pub.params(), *pub.ring());
  std::size_t at = w.BeginSection();
  WritePolySection(w, pub.pk_b());
  WritePolySection(w, pub.pk_a());
  w.FinishSection(at);
  at = w.BeginSection();
  w.PutU32(static_cast<std::uint32_t>(pub.galois_keys().size()));
  for (const auto& [step, gk] : pub.galois_keys()) {
    w.PutI32(step);
    w.PutU64(gk.galois_element);
    w.PutU32(static_cast<std::uint32_t>(gk.key.b.size()));
    for (std::size_t d = 0; d < gk.key.b.size(); ++d) {
      WritePolySection(w, gk.key.b[d]);
      WritePolySection(w, gk.key.a[d]);
    }
  }
  w.FinishSection(at);
  return w.Take();
}

std::shared_ptr<const PublicContext> DeserializePublic(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  ReadHeader(r, Kind::kPublicContext);
  auto [params, ring] = ReadParams(r);
  const std::size_t full = ring->prime_count() - 1;
  const auto ntt = ring::PolyForm::kNtt;

  ByteReader pk = r.GetSection();
  RnsPoly pk_b = ReadPolySection(pk, ring, full, ntt);
  RnsPoly pk_a = ReadPolySection(pk, ring, full, ntt);
  if (!pk.done()) Inconsistent("trailing bytes in public key section");

  ByteReader gr = r.GetSection();
  const std::uint32_t count = gr.GetU32();
  if (count != params.rotation_steps.size()) Inconsistent("Galois key count does not match schedule");
  const std::size_t digit_count = DigitLayout(params).size();
  const std::size_t two_n = 2 * params.poly_degree;
  std::map<int, GaloisKey> galois;
  for (std::uint32_t i = 0; i < count; ++i) {
    GaloisKey gk;
    gk.step = gr.GetI32();
    gk.galois_element = static_cast<std::size_t>(gr.GetU64());
    if (gk.galois_element != ring::PowMod(5, static_cast<std::uint64_t>(gk.step), two_n)) {
      Inconsistent("Galois element does not match its step");
    }
    const std::uint32_t digits = gr.GetU32();
    if (digits != digit_count) Inconsistent("key-switching digit count mismatch");
    for (std::uint32_t d = 0; d < digits; ++d) {
      gk.key.b.push_back(ReadPolySection(gr, ring, full, ntt));
      gk.key.a.push_back(ReadPolySection(gr, ring, full, ntt));
    }
    const int step = gk.step;
    if (!galois.emplace(step, std::move(gk)).second) Inconsistent("duplicate Galois key");
  }
  if (!gr.done()) Inconsistent("trailing bytes in Galois section");
  for (int s : params.rotation_steps) {
    if (!galois.contains(s)) Inconsistent("Galois key missing for scheduled step");
  }
  if (!r.done()) Inconsistent("trailing bytes after public context");
  return std::make_shared<const PublicContext>(std::move(params), std::move(ring), std::move(pk_b),
                                               std::move(pk_a), std::move(galois));
}

Bytes SerializeCiphertext(const Ciphertext& ct, const PublicContext& pub) {
  ByteWriter w;
  WriteHeader(w, Kind::kCiphertext);
  w.PutU64(pub.fingerprint());
  w.PutU32(static_cast<std::uint32_t>(ct.level()));
  w.PutF64(ct.scale);
  WritePolySection(w, ct.c0);
  WritePolySection(w, ct.c1);
  return w.Take();
}

Ciphertext DeserializeCiphertext(std::span<const std::uint8_t> bytes, const PublicContext& pub) {
  ByteReader r(bytes);
  ReadHeader(r, Kind::kCiphertext);
  if (r.GetU64() != pub.fingerprint()) Inconsistent("ciphertext parameters do not match context");
  const std::uint32_t level = r.GetU32();
  if (level > pub.top_level()) Inconsistent("ciphertext level above data chain");
  const double scale = r.GetF64();
  if (!(scale > 0) || !std::isfinite(scale)) Inconsistent("ciphertext scale must be positive");
  const auto coeff = ring::PolyForm::kCoefficient;
  RnsPoly c0 = ReadPolySection(r, pub.ring(), level, coeff);
  RnsPoly c1 = ReadPolySection(r, pub.ring(), level, coeff);
  if (!r.done()) Inconsistent("trailing bytes after ciphertext");
  return Ciphertext{std::move(c0), std::move(c1), scale};
}

Bytes SerializeSecretKey(const PrivateContext& priv) {
  ByteWriter w;
  WriteHeader(w, Kind::kSecretKey);
  WriteParams(w, priv.params(), *priv.public_context()->ring());
  WritePolySection(w, priv.secret_key());
  return w.Take();
}

}  // namespace hecredit::ckks

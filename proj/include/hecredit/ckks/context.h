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

#ifndef HECREDIT_CKKS_CONTEXT_H_
#define HECREDIT_CKKS_CONTEXT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "hecredit/ckks/encoder.h"
#include "hecredit/ckks/params.h"
#include "hecredit/ring/random.h"
#include "hecredit/ring/ring_context.h"
#include "hecredit/ring/rns_poly.h"

namespace hecredit::ckks {

// One key-switching component per decomposition digit, all in NTT form over
// the full chain including the special prime.
struct KeySwitchKey {
  std::vector<ring::RnsPoly> b;
  std::vector<ring::RnsPoly> a;
};

struct GaloisKey {
  int step = 0;
  std::size_t galois_element = 0;
  KeySwitchKey key;
};

// Everything a party needs to encrypt and evaluate. Holds no secret material.
class PublicContext {
 public:
  PublicContext(SecurityParams params, std::shared_ptr<const ring::RingContext> ring,
                ring::RnsPoly pk_b, ring::RnsPoly pk_a, std::map<int, GaloisKey> galois_keys);

  const SecurityParams& params() const { return params_; }
  const std::shared_ptr<const ring::RingContext>& ring() const { return ring_; }
  const Encoder& encoder() const { return encoder_; }
  const ring::RnsPoly& pk_b() const { return pk_b_; }
  const ring::RnsPoly& pk_a() const { return pk_a_; }
  const std::map<int, GaloisKey>& galois_keys() const { return galois_keys_; }
  const GaloisKey* FindGaloisKey(int step) const;

  std::size_t slot_count() const { return params_.slot_count(); }
  std::size_t top_level() const { return params_.top_level(); }
  double default_scale() const { return params_.scale(); }

  // Digit layout shared by key generation and key switching.
  struct Digit {
    std::size_t prime_index;
    int shift_bits;
  };
  const std::vector<Digit>& digits() const { return digits_; }

  // Stable 64-bit hash of the parameters; stamped into ciphertexts.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  SecurityParams params_;
  std::shared_ptr<const ring::RingContext> ring_;
  Encoder encoder_;
  ring::RnsPoly pk_b_;
  ring::RnsPoly pk_a_;
  std::map<int, GaloisKey> galois_keys_;
  std::vector<Digit> digits_;
  std::uint64_t fingerprint_;
};

class PrivateContext {
 public:
  PrivateContext(std::shared_ptr<const PublicContext> pub, ring::RnsPoly secret);

  const std::shared_ptr<const PublicContext>& public_context() const { return public_; }
  const SecurityParams& params() const { return public_->params(); }
  // NTT form over the full chain.
  const ring::RnsPoly& secret_key() const { return secret_; }

 private:
  std::shared_ptr<const PublicContext> public_;
  ring::RnsPoly secret_;
};

std::vector<PublicContext::Digit> DigitLayout(const SecurityParams& params);
std::uint64_t ParamsFingerprint(const SecurityParams& params);

std::shared_ptr<const ring::RingContext> MakeRing(const SecurityParams& params);

std::shared_ptr<const PrivateContext> KeyGen(const SecurityParams& params, ring::RandomSource& rng);

}  // namespace hecredit::ckks

#endif  // HECREDIT_CKKS_CONTEXT_H_

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

#ifndef HECREDIT_CKKS_EVALUATOR_H_
#define HECREDIT_CKKS_EVALUATOR_H_

#include <cstddef>

#include "hecredit/ckks/context.h"
#include "hecredit/ckks/encoder.h"
#include "hecredit/ring/random.h"
#include "hecredit/ring/rns_poly.h"

namespace hecredit::ckks {

// Coefficient form. Scale is tracked as a double; rescaling divides it by the
// dropped prime exactly as the integers are divided.
struct Ciphertext {
  ring::RnsPoly c0;
  ring::RnsPoly c1;
  double scale = 1.0;

  std::size_t level() const { return c0.level(); }
};

// Public-key encryption. The plaintext must sit at the top level.
Ciphertext Encrypt(const Plaintext& pt, const PublicContext& pub, ring::RandomSource& rng);

// Secret-key encryption. Same ciphertext shape with roughly a third of the
// fresh noise of public-key encryption.
Ciphertext EncryptSymmetric(const Plaintext& pt, const PrivateContext& priv, ring::RandomSource& rng);

struct DecryptOptions {
  bool flood = true;
  // Standard deviation of the flooding noise per decoded slot.
  double flood_slot_stddev = 1.0 / 1024.0;
  // Falls back to a system-seeded source when null.
  ring::RandomSource* rng = nullptr;
};

Plaintext Decrypt(const Ciphertext& ct, const PrivateContext& priv, const DecryptOptions& options = {});

Ciphertext AddCt(const Ciphertext& a, const Ciphertext& b);
Ciphertext AddPlain(const Ciphertext& a, const Plaintext& p);
Ciphertext MulPlain(const Ciphertext& a, const Plaintext& p);
Ciphertext Rescale(const Ciphertext& a);
Ciphertext Rotate(const Ciphertext& a, int step, const PublicContext& pub);

// Slot 0 of the result holds the sum of input slots [0, width). Slots at and
// beyond width must be zero.
Ciphertext SumSlots(const Ciphertext& a, std::size_t width, const PublicContext& pub);

bool ScalesMatch(double a, double b);

}  // namespace hecredit::ckks

#endif  // HECREDIT_CKKS_EVALUATOR_H_

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

#ifndef HECREDIT_CKKS_ENCODER_H_
#define HECREDIT_CKKS_ENCODER_H_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "hecredit/ring/ring_context.h"
#include "hecredit/ring/rns_poly.h"

namespace hecredit::ckks {

struct Plaintext {
  ring::RnsPoly poly;
  double scale = 1.0;

  std::size_t level() const { return poly.level(); }
};

// Maps real slot vectors to ring elements through the canonical embedding.
// Slot j corresponds to evaluation at zeta^(5^j) with zeta a primitive 2N-th
// root of unity, so the Galois element 5^k rotates slots left by k.
class Encoder {
 public:
  explicit Encoder(std::shared_ptr<const ring::RingContext> context);

  std::size_t slot_count() const { return slots_; }

  // Missing trailing slots are zero. Result is in coefficient form.
  Plaintext Encode(std::span<const double> values, double scale, std::size_t level) const;
  Plaintext EncodeConstant(double value, double scale, std::size_t level) const;

  std::vector<double> Decode(const Plaintext& pt) const;

 private:
  void Fft(std::vector<std::complex<double>>& a, bool inverse) const;

  std::shared_ptr<const ring::RingContext> context_;
  std::size_t n_;
  std::size_t slots_;
  std::vector<std::complex<double>> twist_;       // omega^k
  std::vector<std::complex<double>> fft_roots_;   // exp(2 pi i k / N)
  std::vector<std::size_t> slot_index_;           // (5^j mod 2N - 1) / 2
  std::vector<std::size_t> conj_index_;
  std::vector<std::size_t> bit_reverse_;
};

}  // namespace hecredit::ckks

#endif  // HECREDIT_CKKS_ENCODER_H_

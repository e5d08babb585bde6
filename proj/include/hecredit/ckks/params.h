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

#ifndef HECREDIT_CKKS_PARAMS_H_
#define HECREDIT_CKKS_PARAMS_H_

#include <cstddef>
#include <string>
#include <vector>

namespace hecredit::ckks {

// Encryption parameters. The last entry of coeff_bit_sizes is the special
// prime used only during key switching; ciphertexts live on the primes before
// it, so the top data level is coeff_bit_sizes.size() - 2.
struct SecurityParams {
  std::size_t poly_degree = 0;
  std::vector<int> coeff_bit_sizes;
  int scale_bits = 0;
  std::vector<int> rotation_steps;
  // Width of the balanced digits each RNS residue is split into when key
  // switching. Zero keeps whole residues.
  int keyswitch_digit_bits = 24;

  // N=4096, primes (40, 20, 40), scale 2^20, rotations by 1..16.
  static SecurityParams Standard();
  // N=8192, primes (40, 21 x 5, 40), scale 2^21.
  static SecurityParams HighSecurity();

  std::size_t slot_count() const { return poly_degree / 2; }
  std::size_t top_level() const { return coeff_bit_sizes.size() - 2; }
  double scale() const;

  // Throws Error(kInvalidArgument) describing the first violated constraint.
  void Validate() const;

  std::string Describe() const;

  friend bool operator==(const SecurityParams&, const SecurityParams&) = default;
};

}  // namespace hecredit::ckks

#endif  // HECREDIT_CKKS_PARAMS_H_

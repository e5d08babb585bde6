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

#include "hecredit/ckks/params.h"

#include <bit>
#include <cmath>
#include <set>
#include <sstream>

#include "hecredit/common/error.h"
#include "hecredit/ring/modulus.h"

namespace hecredit::ckks {

SecurityParams SecurityParams::Standard() {
  SecurityParams p;
  p.poly_degree = 4096;
  p.coeff_bit_sizes = {40, 20, 40};
  p.scale_bits = 20;
  p.rotation_steps = {1, 2, 4, 8, 16};
  return p;
}

SecurityParams SecurityParams::HighSecurity() {
  SecurityParams p;
  p.poly_degree = 8192;
  p.coeff_bit_sizes = {40, 21, 21, 21, 21, 21, 40};
  p.scale_bits = 21;
  p.rotation_steps = {1, 2, 4, 8, 16};
  return p;
}

double SecurityParams::scale() const { return std::ldexp(1.0, scale_bits); }

void SecurityParams::Validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); };
  if (poly_degree < 4 || !std::has_single_bit(poly_degree) || poly_degree > (std::size_t{1} << 17)) {
    fail("poly_degree must be a power of two in [4, 2^17]");
  }
  if (coeff_bit_sizes.size() < 2) fail("need at least one data prime and the special prime");
  for (int b : coeff_bit_sizes) {
    if (b < 2 || b > ring::kMaxPrimeBits) fail("prime bit size out of range: " + std::to_string(b));
  }
  if (scale_bits < 1 || scale_bits >= coeff_bit_sizes.front()) {
    fail("scale must leave headroom below the first prime");
  }
  if (scale_bits >= coeff_bit_sizes.back()) fail("scale must stay below the special prime");
  std::set<int> seen;
  for (int s : rotation_steps) {
    if (s <= 0 || static_cast<std::size_t>(s) >= slot_count()) {
      fail("rotation step out of range: " + std::to_string(s));
    }
    if (!seen.insert(s).second) fail("duplicate rotation step: " + std::to_string(s));
  }
  if (keyswitch_digit_bits < 0 || keyswitch_digit_bits > ring::kMaxPrimeBits) {
    fail("keyswitch_digit_bits out of range");
  }
}

std::string SecurityParams::Describe() const {
  std::ostringstream os;
  os << "N=" << poly_degree << " bits=(";
  for (std::size_t i = 0; i < coeff_bit_sizes.size(); ++i) os << (i ? "," : "") << coeff_bit_sizes[i];
  os << ") scale=2^" << scale_bits;
  return os.str();
}

}  // namespace hecredit::ckks

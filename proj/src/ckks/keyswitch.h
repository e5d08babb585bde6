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

#ifndef HECREDIT_SRC_CKKS_KEYSWITCH_H_
#define HECREDIT_SRC_CKKS_KEYSWITCH_H_

#include <span>
#include <utility>

#include "hecredit/ckks/context.h"

namespace hecredit::ckks {

// Key that re-encrypts c * target under secret. Both inputs in NTT form over
// the full chain.
KeySwitchKey MakeKeySwitchKey(const ring::RnsPoly& target, const ring::RnsPoly& secret,
                              std::span<const PublicContext::Digit> digits, ring::RandomSource& rng);

// Returns (k0, k1) in coefficient form at c's level with k0 + k1*s ~ c*target.
std::pair<ring::RnsPoly, ring::RnsPoly> SwitchKey(const ring::RnsPoly& c, const KeySwitchKey& key,
                                                  std::span<const PublicContext::Digit> digits);

}  // namespace hecredit::ckks

#endif  // HECREDIT_SRC_CKKS_KEYSWITCH_H_

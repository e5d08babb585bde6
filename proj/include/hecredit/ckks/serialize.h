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

#ifndef HECREDIT_CKKS_SERIALIZE_H_
#define HECREDIT_CKKS_SERIALIZE_H_

#include <memory>
#include <span>

#include "hecredit/ckks/context.h"
#include "hecredit/ckks/evaluator.h"
#include "hecredit/common/byte_io.h"

namespace hecredit::ckks {

// Byte format: "HEV1", a kind byte, then u64 length-prefixed sections. All
// integers little endian. Every reader is bounds checked and throws Error with
// kTruncated, kBadMagic, kUnsupportedVersion or kInconsistent.
Bytes SerializePublic(const PublicContext& pub);
std::shared_ptr<const PublicContext> DeserializePublic(std::span<const std::uint8_t> bytes);

Bytes SerializeCiphertext(const Ciphertext& ct, const PublicContext& pub);
Ciphertext DeserializeCiphertext(std::span<const std::uint8_t> bytes, const PublicContext& pub);

// Only for local persistence and leak scanning; never placed on the wire.
Bytes SerializeSecretKey(const PrivateContext& priv);

}  // namespace hecredit::ckks

#endif  // HECREDIT_CKKS_SERIALIZE_H_

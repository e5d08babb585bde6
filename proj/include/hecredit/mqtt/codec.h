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

#ifndef HECREDIT_MQTT_CODEC_H_
#define HECREDIT_MQTT_CODEC_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hecredit/common/byte_io.h"

// MQTT 3.1.1 packet subset at QoS 0: CONNECT, CONNACK, SUBSCRIBE, SUBACK,
// PUBLISH, PINGREQ, PINGRESP, DISCONNECT.
namespace hecredit::mqtt {

inline constexpr std::uint32_t kMaxRemainingLength = (1u << 28) - 1;

struct Connect {
  std::string client_id;
  std::uint16_t keepalive_s = 60;
  bool clean_session = true;
  friend bool operator==(const Connect&, const Connect&) = default;
};

struct ConnAck {
  bool session_present = false;
  std::uint8_t return_code = 0;
  friend bool operator==(const ConnAck&, const ConnAck&) = default;
};

// Requested QoS is always encoded as 0; decoding accepts 0-2 and drops it.
struct Subscribe {
  std::uint16_t packet_id = 1;
  std::vector<std::string> topic_filters;
  friend bool operator==(const Subscribe&, const Subscribe&) = default;
};

inline constexpr std::uint8_t kSubAckFailure = 0x80;

struct SubAck {
  std::uint16_t packet_id = 1;
  std::vector<std::uint8_t> granted;
  friend bool operator==(const SubAck&, const SubAck&) = default;
};

// QoS 0 publishes carry no packet identifier.
struct Publish {
  std::string topic;
  Bytes payload;
  friend bool operator==(const Publish&, const Publish&) = default;
};

struct PingReq {
  friend bool operator==(const PingReq&, const PingReq&) = default;
};
struct PingResp {
  friend bool operator==(const PingResp&, const PingResp&) = default;
};
struct Disconnect {
  friend bool operator==(const Disconnect&, const Disconnect&) = default;
};

using Packet = std::variant<Connect, ConnAck, Subscribe, SubAck, Publish, PingReq, PingResp, Disconnect>;

std::string_view PacketName(const Packet& p);

// Throws Error(kInvalidArgument) for packets outside the invariants: bad or
// wildcard topics, oversize payloads, empty subscriptions.
Bytes Encode(const Packet& p);
// Same bytes as Encode(Publish{topic, payload}) without copying the payload
// into a Packet first.
Bytes EncodePublish(std::string_view topic, std::span<const std::uint8_t> payload);

void EncodeRemainingLength(std::uint32_t value, Bytes& out);

struct Decoded {
  Packet packet;
  std::size_t consumed = 0;
};
struct NeedMoreBytes {};
struct ProtocolError {
  std::string reason;
};
using DecodeResult = std::variant<Decoded, NeedMoreBytes, ProtocolError>;

// Total: every input yields exactly one of the three outcomes. max_packet
// bounds the declared remaining length.
DecodeResult Decode(std::span<const std::uint8_t> in, std::uint32_t max_packet = kMaxRemainingLength);

bool IsValidUtf8(std::string_view s);
// Nonempty, UTF-8, no wildcard characters, at most 65535 bytes.
bool IsValidTopicName(std::string_view topic);
bool HasWildcard(std::string_view filter);

// Per-connection incremental decoder.
class StreamDecoder {
 public:
  explicit StreamDecoder(std::uint32_t max_packet = kMaxRemainingLength) : max_packet_(max_packet) {}

  void Feed(std::span<const std::uint8_t> bytes);
  // Decoded consumes its frame; NeedMoreBytes and ProtocolError leave the
  // buffer untouched.
  DecodeResult Next();
  std::size_t buffered() const { return buffer_.size() - offset_; }

 private:
  std::uint32_t max_packet_;
  Bytes buffer_;
  std::size_t offset_ = 0;
};

}  // namespace hecredit::mqtt

#endif  // HECREDIT_MQTT_CODEC_H_

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

#include "hecredit/mqtt/codec.h"

#include "hecredit/common/error.h"

namespace hecredit::mqtt {

namespace {

enum PacketType : std::uint8_t {
  kConnect = 1,
  kConnAck = 2,
  kPublish = 3,
  kSubscribe = 8,
  kSubAck = 9,
  kPingReq = 12,
  kPingResp = 13,
  kDisconnect = 14,
};

constexpr std::uint8_t kProtocolLevel = 4;

[[noreturn]] void Invalid(const std::string& what) { throw Error(ErrorCode::kInvalidArgument, what); }

void PutU16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void PutString(Bytes& out, std::string_view s) {
  if (s.size() > 0xffff) Invalid("string longer than 65535 bytes");
  PutU16(out, static_cast<std::uint16_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

Bytes Frame(std::uint8_t first, const Bytes& body) {
  if (body.size() > kMaxRemainingLength) Invalid("packet exceeds the 256 MB remaining-length limit");
  Bytes out;
  out.reserve(body.size() + 5);
  out.push_back(first);
  EncodeRemainingLength(static_cast<std::uint32_t>(body.size()), out);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

// Bounds-checked cursor over one packet body. Failures are reported through
// ok() rather than exceptions so the decoder stays total and cheap.
class Cursor {
 public:
  explicit Cursor(std::span<const std::uint8_t> in) : in_(in) {}

  bool ok() const { return ok_; }
  std::size_t remaining() const { return in_.size() - pos_; }

  std::uint8_t U8() {
    if (remaining() < 1) return Fail(), 0;
    return in_[pos_++];
  }
  std::uint16_t U16() {
    if (remaining() < 2) return Fail(), 0;
    std::uint16_t v = static_cast<std::uint16_t>((in_[pos_] << 8) | in_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::string String() {
    std::uint16_t len = U16();
    if (!ok_ || remaining() < len) return Fail(), std::string();
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), len);
    pos_ += len;
    return s;
  }
  Bytes Rest() {
    Bytes b(in_.begin() + static_cast<std::ptrdiff_t>(pos_), in_.end());
    pos_ = in_.size();
    return b;
  }

 private:
  void Fail() { ok_ = false; }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

ProtocolError Err(std::string reason) { return ProtocolError{std::move(reason)}; }

DecodeResult DecodeBody(std::uint8_t type, std::uint8_t flags, std::span<const std::uint8_t> body,
                        std::size_t consumed) {
  Cursor c(body);
  auto done = [&](Packet p) -> DecodeResult {
    if (!c.ok()) return Err("packet body truncated");
    if (c.remaining() != 0) return Err("trailing bytes in packet body");
    return Decoded{std::move(p), consumed};
  };
  switch (type) {
    case kConnect: {
      if (flags != 0) return Err("CONNECT flags must be zero");
      std::string protocol = c.String();
      std::uint8_t level = c.U8();
      std::uint8_t cflags = c.U8();
      std::uint16_t keepalive = c.U16();
      if (!c.ok()) return Err("CONNECT variable header truncated");
      if (protocol != "MQTT") return Err("unsupported protocol name");
      if (level != kProtocolLevel) return Err("unsupported protocol level " + std::to_string(level));
      if (cflags & 0x01) return Err("CONNECT reserved flag set");
      if (cflags & 0xfc) return Err("will, username and password are not supported");
      Connect p;
      p.clean_session = (cflags & 0x02) != 0;
      p.keepalive_s = keepalive;
      p.client_id = c.String();
      if (c.ok() && !IsValidUtf8(p.client_id)) return Err("client id is not valid UTF-8");
      return done(std::move(p));
    }
    case kConnAck: {
      if (flags != 0) return Err("CONNACK flags must be zero");
      std::uint8_t ack = c.U8();
      std::uint8_t rc = c.U8();
      if (c.ok() && (ack & 0xfe)) return Err("CONNACK reserved bits set");
      if (c.ok() && rc > 5) return Err("CONNACK return code out of range");
      return done(ConnAck{(ack & 1) != 0, rc});
    }
    case kPublish: {
      const std::uint8_t qos = (flags >> 1) & 0x3;
      if (qos == 3) return Err("PUBLISH QoS 3 is malformed");
      if (qos != 0) return Err("PUBLISH QoS " + std::to_string(qos) + " is not supported");
      if (flags & 0x08) return Err("DUP must be zero at QoS 0");
      Publish p;
      p.topic = c.String();
      if (!c.ok()) return Err("PUBLISH topic truncated");
      if (!IsValidUtf8(p.topic)) return Err("topic is not valid UTF-8");
      if (!IsValidTopicName(p.topic)) return Err("invalid topic name");
      p.payload = c.Rest();
      return done(std::move(p));
    }
    case kSubscribe: {
      if (flags != 0x2) return Err("SUBSCRIBE flags must be 0x2");
      Subscribe p;
      p.packet_id = c.U16();
      if (c.ok() && p.packet_id == 0) return Err("packet identifier must be nonzero");
      while (c.ok() && c.remaining() > 0) {
        std::string filter = c.String();
        std::uint8_t qos = c.U8();
        if (!c.ok()) break;
        if (filter.empty() || !IsValidUtf8(filter)) return Err("invalid topic filter");
        if (qos > 2) return Err("requested QoS byte malformed");
        p.topic_filters.push_back(std::move(filter));
      }
      if (c.ok() && p.topic_filters.empty()) return Err("SUBSCRIBE without topic filters");
      return done(std::move(p));
    }
    case kSubAck: {
      if (flags != 0) return Err("SUBACK flags must be zero");
      SubAck p;
      p.packet_id = c.U16();
      while (c.ok() && c.remaining() > 0) {
        std::uint8_t g = c.U8();
        if (g > 2 && g != kSubAckFailure) return Err("SUBACK return code invalid");
        p.granted.push_back(g);
      }
      if (c.ok() && p.granted.empty()) return Err("SUBACK without return codes");
      return done(std::move(p));
    }
    case kPingReq:
    case kPingResp:
    case kDisconnect: {
      if (flags != 0) return Err("fixed-header flags must be zero");
      if (!body.empty()) return Err("packet must have no body");
      if (type == kPingReq) return done(PingReq{});
      if (type == kPingResp) return done(PingResp{});
      return done(Disconnect{});
    }
    case 0:
    case 15:
      return Err("reserved packet type " + std::to_string(type));
    default:
      return Err("unsupported packet type " + std::to_string(type));
  }
}

}  // namespace

std::string_view PacketName(const Packet& p) {
  static constexpr std::string_view kNames[] = {"CONNECT", "CONNACK", "SUBSCRIBE", "SUBACK",
                                                "PUBLISH", "PINGREQ", "PINGRESP",  "DISCONNECT"};
  return kNames[p.index()];
}

void EncodeRemainingLength(std::uint32_t value, Bytes& out) {
  if (value > kMaxRemainingLength) Invalid("remaining length exceeds 2^28 - 1");
  do {
    std::uint8_t b = value & 0x7f;
    value >>= 7;
    if (value > 0) b |= 0x80;
    out.push_back(b);
  } while (value > 0);
}

bool IsValidUtf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (c == 0) return false;
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      len = 2;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      len = 3;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    // Overlong forms and code points outside the scalar value range.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return false;
    if (cp >= 0xd800 && cp <= 0xdfff) return false;
    if (cp > 0x10ffff) return false;
    i += len;
  }
  return true;
}

bool HasWildcard(std::string_view filter) { return filter.find_first_of("+#") != std::string_view::npos; }

bool IsValidTopicName(std::string_view topic) {
  return !topic.empty() && topic.size() <= 0xffff && IsValidUtf8(topic) && !HasWildcard(topic);
}

Bytes EncodePublish(std::string_view topic, std::span<const std::uint8_t> payload) {
  if (!IsValidTopicName(topic)) Invalid("invalid publish topic");
  const std::size_t body = 2 + topic.size() + payload.size();
  if (body > kMaxRemainingLength) Invalid("publish payload exceeds the 256 MB remaining-length limit");
  Bytes out;
  out.reserve(body + 5);
  out.push_back(kPublish << 4);
  EncodeRemainingLength(static_cast<std::uint32_t>(body), out);
  PutString(out, topic);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Bytes Encode(const Packet& packet) {
  return std::visit(
      [](const auto& p) -> Bytes {
        using T = std::decay_t<decltype(p)>;
        Bytes body;
        if constexpr (std::is_same_v<T, Connect>) {
          if (!IsValidUtf8(p.client_id)) Invalid("client id is not valid UTF-8");
          PutString(body, "MQTT");
          body.push_back(kProtocolLevel);
          body.push_back(p.clean_session ? 0x02 : 0x00);
          PutU16(body, p.keepalive_s);
          PutString(body, p.client_id);
          return Frame(kConnect << 4, body);
        } else if constexpr (std::is_same_v<T, ConnAck>) {
          if (p.return_code > 5) Invalid("CONNACK return code out of range");
          body = {static_cast<std::uint8_t>(p.session_present ? 1 : 0), p.return_code};
          return Frame(kConnAck << 4, body);
        } else if constexpr (std::is_same_v<T, Subscribe>) {
          if (p.packet_id == 0) Invalid("packet identifier must be nonzero");
          if (p.topic_filters.empty()) Invalid("SUBSCRIBE needs at least one filter");
          PutU16(body, p.packet_id);
          for (const auto& f : p.topic_filters) {
            if (f.empty() || !IsValidUtf8(f)) Invalid("invalid topic filter");
            PutString(body, f);
            body.push_back(0);
          }
          return Frame((kSubscribe << 4) | 0x2, body);
        } else if constexpr (std::is_same_v<T, SubAck>) {
          if (p.granted.empty()) Invalid("SUBACK needs at least one return code");
          PutU16(body, p.packet_id);
          for (std::uint8_t g : p.granted) {
            if (g > 2 && g != kSubAckFailure) Invalid("SUBACK return code invalid");
            body.push_back(g);
          }
          return Frame(kSubAck << 4, body);
        } else if constexpr (std::is_same_v<T, Publish>) {
          return EncodePublish(p.topic, p.payload);
        } else if constexpr (std::is_same_v<T, PingReq>) {
          return Frame(kPingReq << 4, body);
        } else if constexpr (std::is_same_v<T, PingResp>) {
          return Frame(kPingResp << 4, body);
        } else {
          return Frame(kDisconnect << 4, body);
        }
      },
      packet);
}

DecodeResult Decode(std::span<const std::uint8_t> in, std::uint32_t max_packet) {
  if (in.empty()) return NeedMoreBytes{};
  const std::uint8_t type = in[0] >> 4;
  const std::uint8_t flags = in[0] & 0x0f;
  std::uint32_t length = 0;
  std::size_t i = 1;
  for (int shift = 0;; shift += 7) {
    if (i > 4) return Err("remaining length longer than 4 bytes");
    if (i >= in.size()) return NeedMoreBytes{};
    const std::uint8_t b = in[i++];
    length |= static_cast<std::uint32_t>(b & 0x7f) << shift;
    if ((b & 0x80) == 0) {
      if (b == 0 && i > 2) return Err("remaining length not minimally encoded");
      break;
    }
  }
  if (length > max_packet) return Err("packet of " + std::to_string(length) + " bytes exceeds limit");
  if (in.size() - i < length) {
    // Reject unsupported types early so garbage never waits for megabytes.
    if (type == 0 || type == 15 || (type >= 4 && type <= 7) || type == 10 || type == 11) {
      return DecodeBody(type, flags, {}, 0);
    }
    return NeedMoreBytes{};
  }
  return DecodeBody(type, flags, in.subspan(i, length), i + length);
}

void StreamDecoder::Feed(std::span<const std::uint8_t> bytes) {
  if (offset_ > 0 && offset_ >= buffer_.size() / 2) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(offset_));
    offset_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

DecodeResult StreamDecoder::Next() {
  std::span<const std::uint8_t> view(buffer_.data() + offset_, buffer_.size() - offset_);
  DecodeResult r = Decode(view, max_packet_);
  if (auto* d = std::get_if<Decoded>(&r)) {
    offset_ += d->consumed;
    if (offset_ == buffer_.size()) {
      buffer_.clear();
      offset_ = 0;
    }
  }
  return r;
}

}  // namespace hecredit::mqtt

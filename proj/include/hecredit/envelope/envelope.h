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

#ifndef HECREDIT_ENVELOPE_ENVELOPE_H_
#define HECREDIT_ENVELOPE_ENVELOPE_H_

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "hecredit/common/byte_io.h"
#include "hecredit/common/error.h"

// JSON messages exchanged by senders, the receiver and the CAM service.
// Binary fields travel as standard padded Base64.
namespace hecredit::envelope {

inline constexpr int kVersion = 1;
inline constexpr std::string_view kRequestTopic = "bank/credit/request";
inline constexpr std::string_view kResponseTopicPrefix = "bank/credit/response/";

std::string ReplyTopicFor(std::string_view sender_id);

// Failure kinds double as the error_detail strings sent back to clients.
enum class Failure {
  kBadJson,
  kMissingField,
  kBadType,
  kBadBase64,
  kUnsupportedVersion,
  kInvariant,
};
std::string_view FailureName(Failure f);  // "bad_json", "missing_field", ...

class EnvelopeError : public Error {
 public:
  EnvelopeError(Failure failure, std::string field, const std::string& message)
      : Error(ErrorCode::kParse, message), failure_(failure), field_(std::move(field)) {}
  Failure failure() const { return failure_; }
  // Offending field name, empty when the whole document is at fault.
  const std::string& field() const { return field_; }

 private:
  Failure failure_;
  std::string field_;
};

std::string Base64Encode(std::span<const std::uint8_t> bytes);
// Throws EnvelopeError(kBadBase64).
Bytes Base64Decode(std::string_view text, std::string_view field = {});

struct AssessmentRequest {
  int version = kVersion;
  std::string sender_id;
  std::string correlation_id;
  std::string reply_topic;
  std::string context_b64;
  std::string ciphertext_b64;
  friend bool operator==(const AssessmentRequest&, const AssessmentRequest&) = default;
};

// The broker hop requires sender metadata; the HTTP hop to the CAM does not.
enum class Hop { kBroker, kCam };

Bytes EncodeRequest(const AssessmentRequest& req);
// Structural checks only. Base64 fields are decoded later by the consumer
// so that a bad payload can still be answered on reply_topic.
AssessmentRequest DecodeRequest(std::span<const std::uint8_t> json, Hop hop = Hop::kBroker);

// Best-effort extraction of (correlation_id, reply_topic) from a request that
// failed full decoding.
struct ReplyRoute {
  std::string correlation_id;
  std::string reply_topic;
};
std::optional<ReplyRoute> PeekReplyRoute(std::span<const std::uint8_t> json);

enum class Status { kOk, kError };

struct AssessmentResponse {
  int version = kVersion;
  std::string correlation_id;
  Status status = Status::kOk;
  std::optional<std::string> error_detail;
  std::optional<std::string> result_b64;
  double t_receiver_ms = 0.0;
  double t_server_ms = 0.0;
  friend bool operator==(const AssessmentResponse&, const AssessmentResponse&) = default;
};

Bytes EncodeResponse(const AssessmentResponse& resp);
AssessmentResponse DecodeResponse(std::span<const std::uint8_t> json);

// Body returned by POST /assess.
struct CamReply {
  Status status = Status::kOk;
  std::optional<std::string> error_detail;
  std::optional<std::string> result_b64;
  double t_server_ms = 0.0;
  friend bool operator==(const CamReply&, const CamReply&) = default;
};

Bytes EncodeCamReply(const CamReply& reply);
CamReply DecodeCamReply(std::span<const std::uint8_t> json);

// Client-side record of one request.
struct TimingRecord {
  using TimePoint = std::chrono::steady_clock::time_point;

  std::string correlation_id;
  TimePoint t_start, t_send, t_receive, t_end;
  double t_receiver_ms = 0.0;
  double t_server_ms = 0.0;
  int ground_truth = 0;
  int predicted = 0;
  double probability = 0.0;

  double round_trip_ms() const { return Ms(t_end - t_start); }
  double start_send_ms() const { return Ms(t_send - t_start); }
  double send_receive_ms() const { return Ms(t_receive - t_send); }
  double receive_end_ms() const { return Ms(t_end - t_receive); }
  // t_start <= t_send <= t_receive <= t_end and t_server <= t_receiver.
  bool Monotonic() const {
    return t_start <= t_send && t_send <= t_receive && t_receive <= t_end && t_server_ms <= t_receiver_ms;
  }

 private:
  static double Ms(std::chrono::steady_clock::duration d) {
    return std::chrono::duration<double, std::milli>(d).count();
  }
};

}  // namespace hecredit::envelope

#endif  // HECREDIT_ENVELOPE_ENVELOPE_H_

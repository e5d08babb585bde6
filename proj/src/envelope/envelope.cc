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

#include "hecredit/envelope/envelope.h"

#include <sodium.h>

#include <cmath>

#include <nlohmann/json.hpp>

namespace hecredit::envelope {

using nlohmann::json;

namespace {

[[noreturn]] void Fail(Failure f, std::string field, const std::string& message) {
  throw EnvelopeError(f, std::move(field), message);
}

json ParseObject(std::span<const std::uint8_t> bytes) {
  json j = json::parse(bytes.begin(), bytes.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) Fail(Failure::kBadJson, "", "envelope is not valid JSON");
  if (!j.is_object()) Fail(Failure::kBadJson, "", "envelope is not a JSON object");
  return j;
}

const json* Find(const json& j, const char* field, bool required) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) {
    if (required) Fail(Failure::kMissingField, field, std::string("missing field: ") + field);
    return nullptr;
  }
  return &*it;
}

std::optional<std::string> GetString(const json& j, const char* field, bool required) {
  const json* v = Find(j, field, required);
  if (v == nullptr) return std::nullopt;
  if (!v->is_string()) Fail(Failure::kBadType, field, std::string("field is not a string: ") + field);
  return v->get<std::string>();
}

std::string RequireString(const json& j, const char* field) { return *GetString(j, field, true); }

double RequireNumber(const json& j, const char* field) {
  const json* v = Find(j, field, true);
  if (!v->is_number()) Fail(Failure::kBadType, field, std::string("field is not a number: ") + field);
  double d = v->get<double>();
  if (!std::isfinite(d)) Fail(Failure::kBadType, field, std::string("field is not finite: ") + field);
  return d;
}

void CheckVersion(const json& j) {
  const json* v = Find(j, "version", true);
  if (!v->is_number_integer()) Fail(Failure::kBadType, "version", "field is not an integer: version");
  if (v->get<long long>() != kVersion) {
    Fail(Failure::kUnsupportedVersion, "version", "unsupported envelope version " + v->dump());
  }
}

std::string_view StatusName(Status s) { return s == Status::kOk ? "ok" : "error"; }

Status ParseStatus(const json& j) {
  std::string s = RequireString(j, "status");
  if (s == "ok") return Status::kOk;
  if (s == "error") return Status::kError;
  Fail(Failure::kBadType, "status", "status must be ok or error, got " + s);
}

// ok requires a result and non-negative timings; error requires detail.
void CheckOutcome(Status status, const std::optional<std::string>& detail, const std::optional<std::string>& result,
                  std::initializer_list<double> timings) {
  if (status == Status::kOk) {
    if (!result) Fail(Failure::kMissingField, "result_b64", "status ok without result_b64");
    for (double t : timings) {
      if (t < 0) Fail(Failure::kInvariant, "", "negative timing in ok response");
    }
  } else if (!detail) {
    Fail(Failure::kMissingField, "error_detail", "status error without error_detail");
  }
}

Bytes Dump(const json& j) {
  std::string s = j.dump();
  return Bytes(s.begin(), s.end());
}

}  // namespace

std::string_view FailureName(Failure f) {
  switch (f) {
    case Failure::kBadJson:
      return "bad_json";
    case Failure::kMissingField:
      return "missing_field";
    case Failure::kBadType:
      return "bad_type";
    case Failure::kBadBase64:
      return "bad_base64";
    case Failure::kUnsupportedVersion:
      return "unsupported_version";
    case Failure::kInvariant:
      return "invariant_violation";
  }
  return "unknown";
}

std::string ReplyTopicFor(std::string_view sender_id) {
  return std::string(kResponseTopicPrefix) + std::string(sender_id);
}

std::string Base64Encode(std::span<const std::uint8_t> bytes) {
  const int variant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_encoded_len(bytes.size(), variant), '\0');
  sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(), variant);
  out.pop_back();  // the terminating NUL
  return out;
}

Bytes Base64Decode(std::string_view text, std::string_view field) {
  if (text.size() % 4 != 0) Fail(Failure::kBadBase64, std::string(field), "base64 length is not a multiple of 4");
  Bytes out(text.size() / 4 * 3);
  std::size_t len = 0;
  const char* end = nullptr;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &len, &end,
                        sodium_base64_VARIANT_ORIGINAL) != 0 ||
      end != text.data() + text.size()) {
    Fail(Failure::kBadBase64, std::string(field), "invalid base64 in " + std::string(field.empty() ? "input" : field));
  }
  out.resize(len);
  return out;
}

Bytes EncodeRequest(const AssessmentRequest& req) {
  return Dump(json{{"version", req.version},
                   {"sender_id", req.sender_id},
                   {"correlation_id", req.correlation_id},
                   {"reply_topic", req.reply_topic},
                   {"context_b64", req.context_b64},
                   {"ciphertext_b64", req.ciphertext_b64}});
}

AssessmentRequest DecodeRequest(std::span<const std::uint8_t> bytes, Hop hop) {
  json j = ParseObject(bytes);
  CheckVersion(j);
  AssessmentRequest req;
  const bool broker = hop == Hop::kBroker;
  req.sender_id = GetString(j, "sender_id", broker).value_or("");
  req.correlation_id = RequireString(j, "correlation_id");
  req.reply_topic = GetString(j, "reply_topic", broker).value_or("");
  req.context_b64 = RequireString(j, "context_b64");
  req.ciphertext_b64 = RequireString(j, "ciphertext_b64");
  if (req.correlation_id.empty()) Fail(Failure::kInvariant, "correlation_id", "correlation_id is empty");
  if (broker) {
    if (req.sender_id.empty()) Fail(Failure::kInvariant, "sender_id", "sender_id is empty");
    if (req.reply_topic != ReplyTopicFor(req.sender_id)) {
      Fail(Failure::kInvariant, "reply_topic", "reply_topic does not match sender_id");
    }
  }
  return req;
}

std::optional<ReplyRoute> PeekReplyRoute(std::span<const std::uint8_t> bytes) {
  json j = json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  auto topic = j.find("reply_topic");
  if (topic == j.end() || !topic->is_string()) return std::nullopt;
  ReplyRoute route;
  route.reply_topic = topic->get<std::string>();
  if (route.reply_topic.rfind(kResponseTopicPrefix, 0) != 0 ||
      route.reply_topic.size() == kResponseTopicPrefix.size()) {
    return std::nullopt;
  }
  auto corr = j.find("correlation_id");
  if (corr != j.end() && corr->is_string()) route.correlation_id = corr->get<std::string>();
  return route;
}

Bytes EncodeResponse(const AssessmentResponse& resp) {
  json j{{"version", resp.version},
         {"correlation_id", resp.correlation_id},
         {"status", StatusName(resp.status)},
         {"t_receiver_ms", resp.t_receiver_ms},
         {"t_server_ms", resp.t_server_ms}};
  if (resp.error_detail) j["error_detail"] = *resp.error_detail;
  if (resp.result_b64) j["result_b64"] = *resp.result_b64;
  return Dump(j);
}

AssessmentResponse DecodeResponse(std::span<const std::uint8_t> bytes) {
  json j = ParseObject(bytes);
  CheckVersion(j);
  AssessmentResponse resp;
  resp.correlation_id = RequireString(j, "correlation_id");
  resp.status = ParseStatus(j);
  resp.error_detail = GetString(j, "error_detail", false);
  resp.result_b64 = GetString(j, "result_b64", false);
  resp.t_receiver_ms = RequireNumber(j, "t_receiver_ms");
  resp.t_server_ms = RequireNumber(j, "t_server_ms");
  CheckOutcome(resp.status, resp.error_detail, resp.result_b64, {resp.t_receiver_ms, resp.t_server_ms});
  return resp;
}

Bytes EncodeCamReply(const CamReply& reply) {
  json j{{"status", StatusName(reply.status)}, {"t_server_ms", reply.t_server_ms}};
  if (reply.error_detail) j["error_detail"] = *reply.error_detail;
  if (reply.result_b64) j["result_b64"] = *reply.result_b64;
  return Dump(j);
}

CamReply DecodeCamReply(std::span<const std::uint8_t> bytes) {
  json j = ParseObject(bytes);
  CamReply reply;
  reply.status = ParseStatus(j);
  reply.error_detail = GetString(j, "error_detail", false);
  reply.result_b64 = GetString(j, "result_b64", false);
  reply.t_server_ms = RequireNumber(j, "t_server_ms");
  CheckOutcome(reply.status, reply.error_detail, reply.result_b64, {reply.t_server_ms});
  return reply;
}

}  // namespace hecredit::envelope

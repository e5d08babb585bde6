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

#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "hecredit/ckks/context.h"
#include "hecredit/ckks/encoder.h"
#include "hecredit/ckks/evaluator.h"
#include "hecredit/ckks/serialize.h"
#include "hecredit/envelope/envelope.h"
#include "hecredit/ring/random.h"

namespace hecredit::envelope {
namespace {

Bytes Text(std::string_view s) { return Bytes(s.begin(), s.end()); }

AssessmentRequest Fixture() {
  AssessmentRequest r;
  r.sender_id = "MS_1";
  r.correlation_id = "MS_1-7-0a1b2c3d";
  r.reply_topic = ReplyTopicFor("MS_1");
  r.context_b64 = Base64Encode(Text("context bytes"));
  r.ciphertext_b64 = Base64Encode(Text("ciphertext bytes"));
  return r;
}

Failure FailureOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const EnvelopeError& e) {
    return e.failure();
  }
  ADD_FAILURE() << "no EnvelopeError";
  return Failure::kInvariant;
}

TEST(Base64Test, StandardVectors) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"", ""}, {"f", "Zg=="}, {"fo", "Zm8="}, {"foo", "Zm9v"}, {"foob", "Zm9vYg=="},
      {"fooba", "Zm9vYmE="}, {"foobar", "Zm9vYmFy"}};
  for (const auto& [plain, encoded] : cases) {
    EXPECT_EQ(Base64Encode(Text(plain)), encoded);
    EXPECT_EQ(Base64Decode(encoded), Text(plain));
  }
  Bytes all(256);
  for (int i = 0; i < 256; ++i) all[i] = static_cast<std::uint8_t>(i);
  std::string enc = Base64Encode(all);
  EXPECT_NE(enc.find('+'), std::string::npos);
  EXPECT_NE(enc.find('/'), std::string::npos);
  EXPECT_EQ(Base64Decode(enc), all);
}

TEST(Base64Test, RejectsMalformed) {
  for (std::string bad : {"Zg=", "Zg", "Z===", "Zm9v!A==", "Zm-_", "Zm9v\nYmFy", "====", "Zg==Zg=="}) {
    EXPECT_EQ(FailureOf([&] { Base64Decode(bad, "ciphertext_b64"); }), Failure::kBadBase64) << bad;
  }
}

TEST(EnvelopeTest, RequestRoundTrip) {
  auto req = Fixture();
  EXPECT_EQ(DecodeRequest(EncodeRequest(req)), req);
}

TEST(EnvelopeTest, FieldNamesAreExact) {
  auto j = nlohmann::json::parse(EncodeRequest(Fixture()));
  std::vector<std::string> keys;
  for (auto& [k, v] : j.items()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"ciphertext_b64", "context_b64", "correlation_id", "reply_topic",
                                            "sender_id", "version"}));
  AssessmentResponse resp{kVersion, "c", Status::kOk, std::nullopt, "AA==", 2.5, 1.0};
  auto r = nlohmann::json::parse(EncodeResponse(resp));
  EXPECT_TRUE(r.contains("t_receiver_ms"));
  EXPECT_TRUE(r.contains("t_server_ms"));
  EXPECT_TRUE(r.contains("result_b64"));
  EXPECT_EQ(r["status"], "ok");
}

TEST(EnvelopeTest, MissingCorrelationIdIsFieldError) {
  auto j = nlohmann::json::parse(EncodeRequest(Fixture()));
  j.erase("correlation_id");
  std::string text = j.dump();
  try {
    DecodeRequest(Text(text));
    FAIL();
  } catch (const EnvelopeError& e) {
    EXPECT_EQ(e.failure(), Failure::kMissingField);
    EXPECT_EQ(e.field(), "correlation_id");
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(EnvelopeTest, UnknownFieldsAreIgnored) {
  auto j = nlohmann::json::parse(EncodeRequest(Fixture()));
  j["future_field"] = {1, 2, 3};
  EXPECT_EQ(DecodeRequest(Text(j.dump())), Fixture());
}

TEST(EnvelopeTest, StructuralErrors) {
  EXPECT_EQ(FailureOf([] { DecodeRequest(Text("not json")); }), Failure::kBadJson);
  EXPECT_EQ(FailureOf([] { DecodeRequest(Text("[1,2]")); }), Failure::kBadJson);
  auto base = nlohmann::json::parse(EncodeRequest(Fixture()));
  auto v2 = base;
  v2["version"] = 2;
  EXPECT_EQ(FailureOf([&] { DecodeRequest(Text(v2.dump())); }), Failure::kUnsupportedVersion);
  auto typed = base;
  typed["sender_id"] = 5;
  EXPECT_EQ(FailureOf([&] { DecodeRequest(Text(typed.dump())); }), Failure::kBadType);
  auto wrong_topic = base;
  wrong_topic["reply_topic"] = "bank/credit/response/MS_2";
  EXPECT_EQ(FailureOf([&] { DecodeRequest(Text(wrong_topic.dump())); }), Failure::kInvariant);
  auto empty_corr = base;
  empty_corr["correlation_id"] = "";
  EXPECT_EQ(FailureOf([&] { DecodeRequest(Text(empty_corr.dump())); }), Failure::kInvariant);
}

TEST(EnvelopeTest, CamHopMakesSenderMetadataOptional) {
  auto j = nlohmann::json::parse(EncodeRequest(Fixture()));
  j.erase("sender_id");
  j.erase("reply_topic");
  EXPECT_EQ(FailureOf([&] { DecodeRequest(Text(j.dump())); }), Failure::kMissingField);
  auto req = DecodeRequest(Text(j.dump()), Hop::kCam);
  EXPECT_EQ(req.correlation_id, Fixture().correlation_id);
  EXPECT_EQ(req.ciphertext_b64, Fixture().ciphertext_b64);
}

TEST(EnvelopeTest, PeekReplyRouteSurvivesBrokenPayload) {
  auto j = nlohmann::json::parse(EncodeRequest(Fixture()));
  j["ciphertext_b64"] = "***";
  j.erase("context_b64");
  auto route = PeekReplyRoute(Text(j.dump()));
  ASSERT_TRUE(route.has_value());
  EXPECT_EQ(route->reply_topic, "bank/credit/response/MS_1");
  EXPECT_EQ(route->correlation_id, "MS_1-7-0a1b2c3d");
  EXPECT_FALSE(PeekReplyRoute(Text("garbage")).has_value());
  j["reply_topic"] = "elsewhere";
  EXPECT_FALSE(PeekReplyRoute(Text(j.dump())).has_value());
}

TEST(EnvelopeTest, ResponseRoundTripAndInvariants) {
  AssessmentResponse ok{kVersion, "c-1", Status::kOk, std::nullopt, "AAEC", 12.5, 10.25};
  EXPECT_EQ(DecodeResponse(EncodeResponse(ok)), ok);
  AssessmentResponse err{kVersion, "c-2", Status::kError, "bad_base64", std::nullopt, 0.5, 0.0};
  EXPECT_EQ(DecodeResponse(EncodeResponse(err)), err);

  auto no_result = ok;
  no_result.result_b64.reset();
  EXPECT_EQ(FailureOf([&] { DecodeResponse(EncodeResponse(no_result)); }), Failure::kMissingField);
  auto no_detail = err;
  no_detail.error_detail.reset();
  EXPECT_EQ(FailureOf([&] { DecodeResponse(EncodeResponse(no_detail)); }), Failure::kMissingField);
  auto negative = ok;
  negative.t_server_ms = -1;
  EXPECT_EQ(FailureOf([&] { DecodeResponse(EncodeResponse(negative)); }), Failure::kInvariant);
  auto j = nlohmann::json::parse(EncodeResponse(ok));
  j["status"] = "maybe";
  EXPECT_EQ(FailureOf([&] { DecodeResponse(Text(j.dump())); }), Failure::kBadType);
}

TEST(EnvelopeTest, CamReplyRoundTrip) {
  CamReply ok{Status::kOk, std::nullopt, "AAEC", 3.0};
  EXPECT_EQ(DecodeCamReply(EncodeCamReply(ok)), ok);
  CamReply err{Status::kError, "missing Galois key", std::nullopt, 0.0};
  EXPECT_EQ(DecodeCamReply(EncodeCamReply(err)), err);
}

TEST(EnvelopeTest, CiphertextBytesSurviveFullEnvelopePath) {
  auto rng = ring::RandomSource::FromSeed(5);
  auto priv = ckks::KeyGen(ckks::SecurityParams::Standard(), rng);
  const auto& pub = *priv->public_context();
  std::vector<double> x = {0.5, -1.25, 2.0};
  auto pt = pub.encoder().Encode(x, pub.default_scale(), pub.top_level());
  auto ct = ckks::EncryptSymmetric(pt, *priv, rng);
  Bytes ct_bytes = ckks::SerializeCiphertext(ct, pub);
  Bytes ctx_bytes = ckks::SerializePublic(pub);

  auto req = Fixture();
  req.context_b64 = Base64Encode(ctx_bytes);
  req.ciphertext_b64 = Base64Encode(ct_bytes);
  Bytes wire = EncodeRequest(req);
  auto back = DecodeRequest(wire);
  EXPECT_EQ(Base64Decode(back.ciphertext_b64, "ciphertext_b64"), ct_bytes);
  EXPECT_EQ(Base64Decode(back.context_b64, "context_b64"), ctx_bytes);
  // Base64 inflates by 4/3 and the JSON frame adds a little.
  const double expected = 4.0 * ((ct_bytes.size() + 2) / 3 + (ctx_bytes.size() + 2) / 3);
  EXPECT_GE(static_cast<double>(wire.size()), expected);
  EXPECT_LE(static_cast<double>(wire.size()), expected + 512);
}

TEST(TimingRecordTest, DurationsAndMonotonicity) {
  using std::chrono::milliseconds;
  TimingRecord t;
  t.t_start = TimingRecord::TimePoint(milliseconds(1000));
  t.t_send = t.t_start + milliseconds(300);
  t.t_receive = t.t_send + milliseconds(50);
  t.t_end = t.t_receive + milliseconds(2);
  t.t_receiver_ms = 20;
  t.t_server_ms = 15;
  EXPECT_DOUBLE_EQ(t.round_trip_ms(), 352);
  EXPECT_DOUBLE_EQ(t.start_send_ms() + t.send_receive_ms() + t.receive_end_ms(), t.round_trip_ms());
  EXPECT_TRUE(t.Monotonic());
  t.t_server_ms = 25;
  EXPECT_FALSE(t.Monotonic());
  t.t_server_ms = 15;
  t.t_receive = t.t_send - milliseconds(1);
  EXPECT_FALSE(t.Monotonic());
}

}  // namespace
}  // namespace hecredit::envelope

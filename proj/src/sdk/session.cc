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

#include "hecredit/sdk/session.h"

#include <sodium.h>

#include <atomic>
#include <cmath>
#include <mutex>
#include <unordered_map>

#include "hecredit/ckks/evaluator.h"
#include "hecredit/ckks/serialize.h"
#include "hecredit/common/log.h"
#include "hecredit/mqtt/client.h"
#include "hecredit/mqtt/codec.h"
#include "hecredit/ring/random.h"

namespace hecredit::sdk {

using Clock = std::chrono::steady_clock;
using envelope::Status;

namespace {

constexpr std::string_view kComponent = "sdk";

std::string Hex(std::uint64_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[i] = kDigits[v & 0xF];
  return out;
}

}  // namespace

FeatureNormalization FeatureNormalization::FromModel(const lr::ModelBundle& model) {
  return {model.feature_means, model.feature_stds, model.feature_schema_hash};
}

struct Session::Impl {
  SessionOptions options;
  FeatureNormalization norm;
  std::string reply_topic;
  std::shared_ptr<const ckks::PrivateContext> priv;
  std::string context_b64;

  std::mutex rng_mu;
  ring::RandomSource rng = ring::RandomSource::FromSeed(0);
  std::atomic<std::uint64_t> seq{0};

  std::mutex client_mu;
  std::unique_ptr<mqtt::Client> client;

  struct Pending {
    std::promise<Exchange> promise;
    Exchange exchange;
  };
  mutable std::mutex pending_mu;
  std::unordered_map<std::string, Pending> pending;
  std::atomic<std::uint64_t> unmatched{0};

  ring::RandomSource Fork() {
    std::lock_guard lock(rng_mu);
    return rng.Fork();
  }

  void OnMessage(const std::string& topic, Bytes payload) {
    const auto t_receive = Clock::now();
    if (topic != reply_topic) return;
    envelope::AssessmentResponse resp;
    try {
      resp = envelope::DecodeResponse(payload);
    } catch (const envelope::EnvelopeError& e) {
      ++unmatched;
      log::Warn(kComponent, "bad_response", {{"sender_id", options.sender_id}, {"error", e.what()}});
      return;
    }
    std::unique_lock lock(pending_mu);
    auto it = pending.find(resp.correlation_id);
    if (it == pending.end()) {
      lock.unlock();
      ++unmatched;
      log::Warn(kComponent, "unmatched_response",
                {{"sender_id", options.sender_id}, {"correlation_id", resp.correlation_id}});
      return;
    }
    Pending p = std::move(it->second);
    pending.erase(it);
    lock.unlock();
    p.exchange.response = std::move(resp);
    p.exchange.t_receive = t_receive;
    p.promise.set_value(std::move(p.exchange));
  }

  void FailAll(const std::string& reason) {
    std::unordered_map<std::string, Pending> failed;
    {
      std::lock_guard lock(pending_mu);
      failed.swap(pending);
    }
    for (auto& [id, p] : failed) {
      p.promise.set_exception(
          std::make_exception_ptr(Error(ErrorCode::kUnavailable, "broker connection lost: " + reason)));
    }
  }
};

Session::Session(SessionOptions options, FeatureNormalization normalization) : impl_(std::make_unique<Impl>()) {
  Impl& s = *impl_;
  s.options = std::move(options);
  s.norm = std::move(normalization);
  s.reply_topic = envelope::ReplyTopicFor(s.options.sender_id);
  if (s.options.sender_id.empty() || mqtt::HasWildcard(s.options.sender_id) ||
      s.options.sender_id.find('/') != std::string::npos || !mqtt::IsValidTopicName(s.reply_topic)) {
    throw Error(ErrorCode::kInvalidArgument, "sender_id must be a nonempty topic level: " + s.options.sender_id);
  }
  if (s.norm.means.empty() || s.norm.means.size() != s.norm.stds.size()) {
    throw Error(ErrorCode::kSchema, "normalization means and stds differ in length");
  }
  for (double sd : s.norm.stds) {
    if (!(sd > 0) || !std::isfinite(sd)) throw Error(ErrorCode::kSchema, "normalization std must be positive");
  }
  s.options.params.Validate();
  if (s.norm.means.size() > s.options.params.slot_count()) {
    throw Error(ErrorCode::kSchema, "more features than slots");
  }
  s.rng = s.options.seed ? ring::RandomSource::FromSeed(*s.options.seed) : ring::RandomSource::FromSystem();
  auto keygen_rng = s.rng.Fork();
  s.priv = ckks::KeyGen(s.options.params, keygen_rng);
  s.context_b64 = envelope::Base64Encode(ckks::SerializePublic(*s.priv->public_context()));
}

Session::~Session() { Disconnect(); }

void Session::Connect(const std::string& host, std::uint16_t port) {
  Impl& s = *impl_;
  std::lock_guard lock(s.client_mu);
  if (s.client && s.client->connected()) return;
  mqtt::ClientOptions o;
  o.host = host;
  o.port = port;
  o.client_id = s.options.sender_id;
  s.client = mqtt::Client::Connect(
      o, [&s](const std::string& topic, Bytes payload) { s.OnMessage(topic, std::move(payload)); },
      [&s](const std::string& reason) { s.FailAll(reason); });
  s.client->Subscribe({s.reply_topic});
}

void Session::Disconnect() {
  Impl& s = *impl_;
  std::unique_ptr<mqtt::Client> client;
  {
    std::lock_guard lock(s.client_mu);
    client = std::move(s.client);
  }
  if (client) client->Disconnect();
  s.FailAll("session disconnected");
}

void Session::CheckSchema(const std::string& server_schema_hash) const {
  if (server_schema_hash != impl_->norm.schema_hash) {
    throw Error(ErrorCode::kSchema, "server model schema " + server_schema_hash + " does not match SDK schema " +
                                        impl_->norm.schema_hash);
  }
}

PreparedRequest Session::Prepare(std::span<const double> raw) {
  Impl& s = *impl_;
  PreparedRequest out;
  out.t_start = Clock::now();
  if (raw.size() != s.norm.means.size()) {
    throw Error(ErrorCode::kSchema, "expected " + std::to_string(s.norm.means.size()) + " features, got " +
                                        std::to_string(raw.size()));
  }
  std::vector<double> z(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i])) throw Error(ErrorCode::kInvalidArgument, "feature " + std::to_string(i) + " is not finite");
    z[i] = (raw[i] - s.norm.means[i]) / s.norm.stds[i];
  }
  const auto& pub = *s.priv->public_context();
  auto rng = s.Fork();
  auto ct = ckks::EncryptSymmetric(pub.encoder().Encode(z, pub.default_scale(), pub.top_level()), *s.priv, rng);
  sodium_memzero(z.data(), z.size() * sizeof(double));

  auto& req = out.request;
  req.sender_id = s.options.sender_id;
  req.correlation_id = s.options.sender_id + "-" + std::to_string(s.seq++) + "-" + Hex(rng());
  req.reply_topic = s.reply_topic;
  req.context_b64 = s.context_b64;
  req.ciphertext_b64 = envelope::Base64Encode(ckks::SerializeCiphertext(ct, pub));
  out.wire = envelope::EncodeRequest(req);
  return out;
}

std::future<Exchange> Session::Send(PreparedRequest prepared) {
  Impl& s = *impl_;
  const std::string id = prepared.request.correlation_id;
  std::future<Exchange> future;
  {
    std::lock_guard lock(s.pending_mu);
    Impl::Pending p;
    p.exchange.t_start = prepared.t_start;
    p.exchange.payload_bytes = prepared.wire.size();
    future = p.promise.get_future();
    if (!s.pending.emplace(id, std::move(p)).second) {
      throw Error(ErrorCode::kInvalidArgument, "correlation id already in flight: " + id);
    }
  }
  auto forget = [&] {
    std::lock_guard lock(s.pending_mu);
    s.pending.erase(id);
  };
  mqtt::Client* client;
  {
    std::lock_guard lock(s.client_mu);
    client = s.client.get();
  }
  if (client == nullptr) {
    forget();
    throw Error(ErrorCode::kUnavailable, "session is not connected");
  }
  // t_send is stamped before the write so that a fast reply can never arrive
  // "before" it was sent.
  {
    std::lock_guard lock(s.pending_mu);
    auto it = s.pending.find(id);
    if (it != s.pending.end()) it->second.exchange.t_send = Clock::now();
  }
  try {
    client->Publish(envelope::kRequestTopic, prepared.wire);
  } catch (...) {
    forget();
    throw;
  }
  return future;
}

Exchange Session::SendAndAwait(PreparedRequest prepared) {
  const std::string id = prepared.request.correlation_id;
  auto future = Send(std::move(prepared));
  if (future.wait_for(impl_->options.timeout) != std::future_status::ready) {
    std::lock_guard lock(impl_->pending_mu);
    impl_->pending.erase(id);
    throw Error(ErrorCode::kTimeout, "no response for " + id);
  }
  return future.get();
}

Outcome Session::Finalize(const Exchange& ex) {
  const auto& resp = ex.response;
  if (resp.status != Status::kOk) throw RemoteError(resp.error_detail.value_or("unknown"));
  Impl& s = *impl_;
  const auto& pub = *s.priv->public_context();
  auto ct = ckks::DeserializeCiphertext(envelope::Base64Decode(*resp.result_b64, "result_b64"), pub);
  auto rng = s.Fork();
  ckks::DecryptOptions opts;
  opts.rng = &rng;
  Outcome out;
  out.logit = pub.encoder().Decode(ckks::Decrypt(ct, *s.priv, opts))[0];
  out.probability = lr::Sigmoid(out.logit);
  out.decision = lr::Decision(out.probability);
  auto& t = out.timing;
  t.t_end = Clock::now();
  t.correlation_id = resp.correlation_id;
  t.t_start = ex.t_start;
  t.t_send = ex.t_send;
  t.t_receive = ex.t_receive;
  t.t_receiver_ms = resp.t_receiver_ms;
  t.t_server_ms = resp.t_server_ms;
  t.predicted = out.decision ? 1 : 0;
  t.probability = out.probability;
  return out;
}

const std::string& Session::sender_id() const { return impl_->options.sender_id; }
const std::string& Session::reply_topic() const { return impl_->reply_topic; }
std::size_t Session::slot_count() const { return impl_->priv->public_context()->slot_count(); }
const ckks::PublicContext& Session::public_context() const { return *impl_->priv->public_context(); }
const ckks::PrivateContext& Session::private_context() const { return *impl_->priv; }
std::uint64_t Session::unmatched_responses() const { return impl_->unmatched.load(); }
std::size_t Session::in_flight() const {
  std::lock_guard lock(impl_->pending_mu);
  return impl_->pending.size();
}

}  // namespace hecredit::sdk

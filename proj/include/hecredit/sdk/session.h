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

#ifndef HECREDIT_SDK_SESSION_H_
#define HECREDIT_SDK_SESSION_H_

#include <chrono>
#include <cstdint>
#include <future>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hecredit/ckks/context.h"
#include "hecredit/ckks/params.h"
#include "hecredit/common/error.h"
#include "hecredit/envelope/envelope.h"
#include "hecredit/lr/model.h"

namespace hecredit::sdk {

// Normalization statistics shipped inside the SDK. Weights stay on the server.
struct FeatureNormalization {
  std::vector<double> means;
  std::vector<double> stds;
  std::string schema_hash;

  static FeatureNormalization FromModel(const lr::ModelBundle& model);
};

struct SessionOptions {
  std::string sender_id;
  ckks::SecurityParams params = ckks::SecurityParams::Standard();
  // Reproducible keys and randomness for fixtures. Unset draws from the OS.
  std::optional<std::uint64_t> seed;
  std::chrono::milliseconds timeout{60000};
};

// Server-side failure carried in an error-status response.
class RemoteError : public Error {
 public:
  explicit RemoteError(std::string detail)
      : Error(ErrorCode::kUnavailable, "assessment failed: " + detail), detail_(std::move(detail)) {}
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
};

struct PreparedRequest {
  envelope::AssessmentRequest request;
  Bytes wire;  // JSON bytes published to the broker
  envelope::TimingRecord::TimePoint t_start;
};

struct Exchange {
  envelope::AssessmentResponse response;
  envelope::TimingRecord::TimePoint t_start, t_send, t_receive;
  std::size_t payload_bytes = 0;
};

struct Outcome {
  double logit = 0.0;
  double probability = 0.0;
  bool decision = false;
  envelope::TimingRecord timing;
};

// A sender's key material, broker connection and in-flight requests. Keys
// are generated per session and reused across its requests. Every public
// member is safe to call from several threads at once.
class Session {
 public:
  // Generates keys. Throws kInvalidArgument for bad parameters or a sender id
  // that cannot form a topic, kSchema for inconsistent normalization.
  Session(SessionOptions options, FeatureNormalization normalization);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // Opens the sender's single broker connection and subscribes to its reply
  // topic. Must precede Send.
  void Connect(const std::string& host, std::uint16_t port);
  void Disconnect();

  // Throws kSchema when the server model was trained on another schema.
  void CheckSchema(const std::string& server_schema_hash) const;

  // Encrypts one normalized raw feature row. Throws kSchema on a
  // length mismatch and kInvalidArgument on non-finite values.
  PreparedRequest Prepare(std::span<const double> raw);

  // Publishes and resolves when the matching response arrives. The future
  // throws kUnavailable if the broker connection drops first.
  std::future<Exchange> Send(PreparedRequest prepared);
  // Send plus a bounded wait. Throws kTimeout after options.timeout.
  Exchange SendAndAwait(PreparedRequest prepared);

  // Decrypts slot 0, applies the sigmoid and stamps t_end. Throws RemoteError
  // for error-status responses.
  Outcome Finalize(const Exchange& exchange);

  const std::string& sender_id() const;
  const std::string& reply_topic() const;
  std::size_t slot_count() const;
  const ckks::PublicContext& public_context() const;
  // Never leaves the process. Exposed for local checks only.
  const ckks::PrivateContext& private_context() const;
  // Responses whose correlation id matched nothing in flight.
  std::uint64_t unmatched_responses() const;
  std::size_t in_flight() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hecredit::sdk

#endif  // HECREDIT_SDK_SESSION_H_

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

#ifndef HECREDIT_RECEIVER_RECEIVER_H_
#define HECREDIT_RECEIVER_RECEIVER_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "hecredit/cam/engine.h"
#include "hecredit/common/byte_io.h"
#include "hecredit/envelope/envelope.h"

namespace hecredit::receiver {

enum class Mode { kLocalCam, kRemoteCam };

std::string_view ModeName(Mode m);

struct ReceiverConfig {
  std::string broker_host = "127.0.0.1";
  std::uint16_t broker_port = 1883;
  std::string client_id = "message-receiver";
  std::string request_topic = std::string(envelope::kRequestTopic);
  Mode mode = Mode::kLocalCam;
  // Base URL of the CAM service, e.g. http://10.0.0.5:8080. Remote mode.
  std::string cam_url;
  // Model bundle JSON. Local mode, unless an engine is passed in directly.
  std::string model_path;
  // Concurrent evaluations. 0 means one per hardware thread.
  unsigned workers = 0;
  std::chrono::seconds cam_timeout{30};
};

struct ReceiverStats {
  std::uint64_t received = 0;
  std::uint64_t ok = 0;
  std::uint64_t errors = 0;
  // Requests too broken to find a reply topic for.
  std::uint64_t dropped = 0;
};

// Where a response goes. Empty when the request could not be answered.
struct Outgoing {
  std::string topic;
  Bytes payload;
  envelope::AssessmentResponse response;
};

// Turns one request into its response. `evaluate` is either the in-process
// engine or the HTTP call to the CAM. `arrived` starts the receiver clock.
using Evaluator = std::function<envelope::CamReply(const envelope::AssessmentRequest&)>;
std::optional<Outgoing> HandleRequest(std::span<const std::uint8_t> payload, const Evaluator& evaluate,
                                      std::chrono::steady_clock::time_point arrived);

// Evaluator that POSTs to <cam_url>/assess. Transport failures and non-200
// answers become error replies ("cam_unreachable", "cam_error", ...).
Evaluator RemoteEvaluator(std::string cam_url, std::chrono::seconds timeout);
Evaluator LocalEvaluator(std::shared_ptr<const cam::AssessmentEngine> engine);

// Subscribes to the request topic and answers every request on its reply
// topic. Holds only public material: nothing here can decrypt.
class Receiver {
 public:
  // In local mode `engine` overrides cfg.model_path. Throws kInvalidArgument
  // for an incomplete configuration.
  explicit Receiver(ReceiverConfig cfg, std::shared_ptr<const cam::AssessmentEngine> engine = nullptr);
  ~Receiver();
  Receiver(const Receiver&) = delete;
  Receiver& operator=(const Receiver&) = delete;

  // Connects and subscribes. Throws kUnavailable if the broker is unreachable.
  void Start();
  // Stops taking requests, finishes the ones in flight, then disconnects.
  void Stop();
  // Blocks until Stop or until the broker connection drops.
  void Wait();

  ReceiverStats stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hecredit::receiver

#endif  // HECREDIT_RECEIVER_RECEIVER_H_

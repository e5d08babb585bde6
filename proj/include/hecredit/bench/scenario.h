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

#ifndef HECREDIT_BENCH_SCENARIO_H_
#define HECREDIT_BENCH_SCENARIO_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hecredit/broker/broker.h"
#include "hecredit/ckks/params.h"
#include "hecredit/data/dataset.h"
#include "hecredit/envelope/envelope.h"
#include "hecredit/lr/model.h"
#include "hecredit/receiver/receiver.h"
#include "hecredit/sdk/session.h"

namespace hecredit::bench {

enum class ScenarioId { kOne = 1, kTwo = 2, kThree = 3, kFour = 4, kHighSec = 5 };

// Scenarios 1 and 3 evaluate inside the receiver, 2 and 4 go through the HTTP
// CAM. 1 and 3 (and 2 and 4) differ only in where the broker runs, which
// Topology expresses. highsec is scenario 2 at N=8192.
struct ScenarioSpec {
  ScenarioId id = ScenarioId::kThree;
  std::string label;
  receiver::Mode mode = receiver::Mode::kLocalCam;
  ckks::SecurityParams params;
};

ScenarioSpec SpecFor(ScenarioId id);
// Accepts "1".."4" and "highsec". Throws kInvalidArgument.
ScenarioId ParseScenarioId(std::string_view text);
std::string_view ScenarioKey(ScenarioId id);

struct Topology {
  // host:port of a running broker. Empty starts one in-process on loopback.
  std::string broker_address;
  // CAM base URL for scenarios 2, 4 and highsec. Empty starts one in-process.
  std::string cam_url;
  // A receiver is already subscribed on the broker; do not start one.
  bool external_receiver = false;
  // Outbound queue per session on the in-process broker. Large enough for a
  // burst of 100 high-security requests in flight to one receiver.
  std::size_t broker_session_buffer = std::size_t{2} << 30;
  unsigned receiver_workers = 0;
};

struct RunConfig {
  int senders = 5;
  int requests_per_sender = 20;
  // Requests of one sender that may be encrypting at the same time. Bounds
  // memory at N=8192, where each request is tens of megabytes.
  int max_preparing_per_sender = 1;
  std::uint64_t seed = 1;
  std::chrono::milliseconds timeout{60000};
  Topology topology;
};

// Optional taps for privacy checks. Called from sender threads.
struct Hooks {
  broker::PublishObserver broker_observer;  // in-process broker only
  std::function<void(const sdk::Session&)> on_session;
  std::function<void(const sdk::PreparedRequest&, std::span<const double> raw_row)> on_request;
};

struct ScenarioResult {
  ScenarioSpec spec;
  std::vector<envelope::TimingRecord> records;
  std::size_t expected = 0;
  std::size_t lost = 0;    // timed out or connection lost
  std::size_t failed = 0;  // error-status responses
  std::vector<std::string> failures;
  double wall_ms = 0.0;
  double mean_payload_bytes = 0.0;
  double encrypted_accuracy = 0.0;
  double plaintext_accuracy = 0.0;  // same model, same sampled rows
  double decision_agreement = 0.0;  // encrypted vs plaintext decisions
  std::size_t unmatched_ids = 0;

  bool ok() const { return lost == 0 && failed == 0 && records.size() == expected; }
};

// Trained model plus held-out rows to draw requests from.
struct Workload {
  lr::ModelBundle model;
  std::vector<data::FeatureRow> test;
  std::size_t train_rows = 0;
  double plaintext_accuracy = 0.0;  // over all of test
  std::string source;
};

// Loads and cleans the CSV at data_path, or synthesizes synthetic_rows
// records when the path is empty, then splits and trains.
Workload PrepareWorkload(const std::string& data_path, std::uint64_t seed, std::size_t synthetic_rows = 5000,
                         double test_ratio = data::kDefaultTestRatio);

// Runs n_senders x n_requests concurrent requests over test rows sampled with
// the seed, and tallies predictions against the rows' labels. Throws only
// when the topology cannot be brought up; request failures are counted.
ScenarioResult RunScenario(const ScenarioSpec& spec, std::span<const data::FeatureRow> test_rows,
                           const lr::ModelBundle& model, const RunConfig& config, const Hooks& hooks = {});

}  // namespace hecredit::bench

#endif  // HECREDIT_BENCH_SCENARIO_H_

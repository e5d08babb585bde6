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

#include "hecredit/bench/scenario.h"

#include <atomic>
#include <future>
#include <mutex>
#include <optional>
#include <semaphore>
#include <thread>

#include "hecredit/cam/engine.h"
#include "hecredit/cam/http.h"
#include "hecredit/common/error.h"
#include "hecredit/common/log.h"
#include "hecredit/mqtt/client.h"
#include "hecredit/ring/random.h"

namespace hecredit::bench {

using Clock = std::chrono::steady_clock;

namespace {

constexpr std::string_view kComponent = "bench";
constexpr std::size_t kMaxFailureNotes = 10;

}  // namespace

ScenarioSpec SpecFor(ScenarioId id) {
  ScenarioSpec s;
  s.id = id;
  s.params = ckks::SecurityParams::Standard();
  switch (id) {
    case ScenarioId::kOne:
      s.label = "Scenario 1 (receiver-hosted CAM, N=4096)";
      s.mode = receiver::Mode::kLocalCam;
      break;
    case ScenarioId::kTwo:
      s.label = "Scenario 2 (HTTP CAM, N=4096)";
      s.mode = receiver::Mode::kRemoteCam;
      break;
    case ScenarioId::kThree:
      s.label = "Scenario 3 (receiver-hosted CAM, N=4096)";
      s.mode = receiver::Mode::kLocalCam;
      break;
    case ScenarioId::kFour:
      s.label = "Scenario 4 (HTTP CAM, N=4096)";
      s.mode = receiver::Mode::kRemoteCam;
      break;
    case ScenarioId::kHighSec:
      s.label = "High security (HTTP CAM, N=8192)";
      s.mode = receiver::Mode::kRemoteCam;
      s.params = ckks::SecurityParams::HighSecurity();
      break;
  }
  return s;
}

ScenarioId ParseScenarioId(std::string_view text) {
  if (text == "1") return ScenarioId::kOne;
  if (text == "2") return ScenarioId::kTwo;
  if (text == "3") return ScenarioId::kThree;
  if (text == "4") return ScenarioId::kFour;
  if (text == "highsec") return ScenarioId::kHighSec;
  throw Error(ErrorCode::kInvalidArgument, "unknown scenario: " + std::string(text));
}

std::string_view ScenarioKey(ScenarioId id) {
  switch (id) {
    case ScenarioId::kOne:
      return "1";
    case ScenarioId::kTwo:
      return "2";
    case ScenarioId::kThree:
      return "3";
    case ScenarioId::kFour:
      return "4";
    case ScenarioId::kHighSec:
      return "highsec";
  }
  return "?";
}

Workload PrepareWorkload(const std::string& data_path, std::uint64_t seed, std::size_t synthetic_rows,
                         double test_ratio) {
  Workload w;
  std::vector<data::RawRecord> records;
  if (data_path.empty()) {
    records = data::Synthesize(synthetic_rows, seed).records;
    w.source = "synthetic(" + std::to_string(synthetic_rows) + ")";
  } else {
    records = data::LoadCsv(data_path);
    w.source = data_path;
  }
  auto split = data::SplitRows(data::ExpandFeatures(data::Clean(records)), test_ratio, seed);
  if (split.train.empty() || split.test.empty()) throw Error(ErrorCode::kInvalidArgument, "dataset too small to split");
  lr::TrainConfig tc;
  tc.seed = seed;
  w.model = data::FitModel(split.train, tc);
  w.train_rows = split.train.size();
  w.test = std::move(split.test);
  w.plaintext_accuracy = data::Accuracy(w.test, w.model);
  return w;
}

ScenarioResult RunScenario(const ScenarioSpec& spec, std::span<const data::FeatureRow> test_rows,
                           const lr::ModelBundle& model, const RunConfig& config, const Hooks& hooks) {
  if (test_rows.empty()) throw Error(ErrorCode::kInvalidArgument, "no test rows");
  if (config.senders < 1 || config.requests_per_sender < 1 || config.max_preparing_per_sender < 1) {
    throw Error(ErrorCode::kInvalidArgument, "senders, requests and preparation limit must be positive");
  }
  const Topology& topo = config.topology;

  // Services, started in dependency order and stopped in reverse.
  std::unique_ptr<broker::Broker> broker;
  std::string broker_host;
  std::uint16_t broker_port;
  if (topo.broker_address.empty()) {
    broker::BrokerConfig bc;
    bc.port = 0;
    bc.session_buffer_bytes = topo.broker_session_buffer;
    broker = std::make_unique<broker::Broker>(bc);
    if (hooks.broker_observer) broker->SetObserver(hooks.broker_observer);
    broker->Start();
    broker_host = "127.0.0.1";
    broker_port = broker->port();
  } else {
    std::tie(broker_host, broker_port) = mqtt::ParseHostPort(topo.broker_address, 1883);
  }

  auto engine = std::make_shared<const cam::AssessmentEngine>(model);
  std::unique_ptr<cam::CamServer> cam_server;
  std::string cam_url = topo.cam_url;
  if (spec.mode == receiver::Mode::kRemoteCam && cam_url.empty() && !topo.external_receiver) {
    cam::CamConfig cc;
    cc.port = 0;
    cc.workers = topo.receiver_workers;
    cam_server = std::make_unique<cam::CamServer>(cc, engine);
    cam_server->Start();
    cam_url = cam_server->url();
  }

  std::unique_ptr<receiver::Receiver> recv;
  if (!topo.external_receiver) {
    receiver::ReceiverConfig rc;
    rc.broker_host = broker_host;
    rc.broker_port = broker_port;
    rc.mode = spec.mode;
    rc.cam_url = cam_url;
    rc.workers = topo.receiver_workers;
    rc.client_id = "message-receiver-" + std::string(ScenarioKey(spec.id));
    recv = std::make_unique<receiver::Receiver>(rc, spec.mode == receiver::Mode::kLocalCam ? engine : nullptr);
    recv->Start();
  }

  // One key set per sender, reused for all of its requests.
  std::vector<std::unique_ptr<sdk::Session>> sessions;
  for (int s = 0; s < config.senders; ++s) {
    sdk::SessionOptions so;
    so.sender_id = "MS_" + std::to_string(s + 1);
    so.params = spec.params;
    so.seed = config.seed * 1000 + static_cast<std::uint64_t>(s);
    so.timeout = config.timeout;
    auto session = std::make_unique<sdk::Session>(so, sdk::FeatureNormalization::FromModel(model));
    session->CheckSchema(model.feature_schema_hash);
    session->Connect(broker_host, broker_port);
    if (hooks.on_session) hooks.on_session(*session);
    sessions.push_back(std::move(session));
  }

  // Row choices are fixed by the seed, independent of thread timing.
  auto pick = ring::RandomSource::FromSeed(config.seed);
  std::vector<std::vector<std::size_t>> rows(config.senders);
  for (auto& per_sender : rows) {
    for (int r = 0; r < config.requests_per_sender; ++r) per_sender.push_back(pick.UniformBelow(test_rows.size()));
  }

  ScenarioResult result;
  result.spec = spec;
  result.expected = static_cast<std::size_t>(config.senders) * config.requests_per_sender;
  std::mutex mu;
  std::vector<std::size_t> answered_rows;
  std::atomic<std::uint64_t> payload_total{0};
  auto note = [&](const std::string& what) {
    std::lock_guard lock(mu);
    if (result.failures.size() < kMaxFailureNotes) result.failures.push_back(what);
  };

  log::Info(kComponent, "start",
            {{"scenario", spec.label},
             {"senders", std::to_string(config.senders)},
             {"requests_per_sender", std::to_string(config.requests_per_sender)},
             {"params", spec.params.Describe()}});
  const auto t0 = Clock::now();
  std::vector<std::unique_ptr<std::counting_semaphore<>>> gates;
  for (int s = 0; s < config.senders; ++s) {
    gates.push_back(std::make_unique<std::counting_semaphore<>>(config.max_preparing_per_sender));
  }
  std::vector<std::thread> threads;
  for (int s = 0; s < config.senders; ++s) {
    for (int r = 0; r < config.requests_per_sender; ++r) {
      threads.emplace_back([&, s, r] {
        sdk::Session& session = *sessions[s];
        const data::FeatureRow& row = test_rows[rows[s][r]];
        std::future<sdk::Exchange> future;
        try {
          gates[s]->acquire();
          std::optional<sdk::PreparedRequest> prepared;
          try {
            prepared.emplace(session.Prepare(row.values));
          } catch (...) {
            gates[s]->release();
            throw;
          }
          gates[s]->release();
          if (hooks.on_request) hooks.on_request(*prepared, row.values);
          payload_total += prepared->wire.size();
          future = session.Send(std::move(*prepared));
        } catch (const std::exception& e) {
          std::lock_guard lock(mu);
          ++result.lost;
          if (result.failures.size() < kMaxFailureNotes) result.failures.push_back(std::string("send: ") + e.what());
          return;
        }
        if (future.wait_for(config.timeout) != std::future_status::ready) {
          std::lock_guard lock(mu);
          ++result.lost;
          if (result.failures.size() < kMaxFailureNotes) result.failures.push_back("timeout");
          return;
        }
        try {
          auto outcome = session.Finalize(future.get());
          outcome.timing.ground_truth = row.label;
          std::lock_guard lock(mu);
          result.records.push_back(outcome.timing);
          answered_rows.push_back(rows[s][r]);
        } catch (const sdk::RemoteError& e) {
          {
            std::lock_guard lock(mu);
            ++result.failed;
          }
          note(std::string("remote: ") + e.detail());
        } catch (const std::exception& e) {
          {
            std::lock_guard lock(mu);
            ++result.lost;
          }
          note(std::string("await: ") + e.what());
        }
      });
    }
  }
  for (auto& t : threads) t.join();
  result.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  result.mean_payload_bytes = static_cast<double>(payload_total.load()) / static_cast<double>(result.expected);

  std::size_t correct = 0, plain_correct = 0, agree = 0;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& row = test_rows[answered_rows[i]];
    const int plain = lr::Decision(lr::PredictPlain(row.values, model)) ? 1 : 0;
    correct += result.records[i].predicted == row.label;
    plain_correct += plain == row.label;
    agree += result.records[i].predicted == plain;
  }
  if (!result.records.empty()) {
    result.encrypted_accuracy = static_cast<double>(correct) / static_cast<double>(result.records.size());
    result.plaintext_accuracy = static_cast<double>(plain_correct) / static_cast<double>(result.records.size());
    result.decision_agreement = static_cast<double>(agree) / static_cast<double>(result.records.size());
  }
  for (const auto& s : sessions) result.unmatched_ids += s->unmatched_responses();

  sessions.clear();
  if (recv) recv->Stop();
  if (cam_server) cam_server->Stop();
  if (broker) broker->Stop();
  log::Info(kComponent, "done",
            {{"scenario", spec.label},
             {"responses", std::to_string(result.records.size())},
             {"lost", std::to_string(result.lost)},
             {"failed", std::to_string(result.failed)},
             {"wall_ms", std::to_string(result.wall_ms)}});
  return result;
}

}  // namespace hecredit::bench

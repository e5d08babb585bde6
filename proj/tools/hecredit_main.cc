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

// Command line front end. Subcommands prepare data and models, run the
// scenario benchmark, or serve one component of the system.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>

#include "hecredit/bench/report.h"
#include "hecredit/bench/scenario.h"
#include "hecredit/broker/broker.h"
#include "hecredit/cam/engine.h"
#include "hecredit/cam/http.h"
#include "hecredit/common/error.h"
#include "hecredit/common/log.h"
#include "hecredit/data/dataset.h"
#include "hecredit/mqtt/client.h"
#include "hecredit/receiver/receiver.h"

namespace hecredit {
namespace {

constexpr std::string_view kComponent = "cli";

// Blocks SIGINT and SIGTERM in every thread spawned afterwards so that
// WaitForSignal is the only place they are consumed.
sigset_t BlockStopSignals() {
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  return set;
}

void WaitForSignal(const sigset_t& set) {
  int sig = 0;
  sigwait(&set, &sig);
  log::Info(kComponent, "signal", {{"signal", std::to_string(sig)}});
}

std::ostream& OpenOut(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + path);
  return file;
}

struct TrainArgs {
  std::string data;
  std::size_t rows = 5000;
  std::uint64_t seed = 1;
  double test_ratio = data::kDefaultTestRatio;
  int epochs = 200;
  double learning_rate = 0.1;
  std::string out = "model.json";
};

int Train(const TrainArgs& a) {
  std::vector<data::RawRecord> records =
      a.data.empty() ? data::Synthesize(a.rows, a.seed).records : data::LoadCsv(a.data);
  auto split = data::SplitRows(data::ExpandFeatures(data::Clean(records)), a.test_ratio, a.seed);
  lr::TrainConfig tc;
  tc.seed = a.seed;
  tc.epochs = a.epochs;
  tc.learning_rate = a.learning_rate;
  auto model = data::FitModel(split.train, tc);
  model.Save(a.out);
  std::cout << "train_rows=" << split.train.size() << " test_rows=" << split.test.size()
            << " train_accuracy=" << data::Accuracy(split.train, model)
            << " test_accuracy=" << data::Accuracy(split.test, model) << " model=" << a.out << "\n";
  return 0;
}

int SynthData(std::size_t rows, std::uint64_t seed, const std::string& out) {
  auto synth = data::Synthesize(rows, seed);
  std::ofstream file;
  data::WriteCsv(OpenOut(out, file), synth.records);
  return 0;
}

struct RunArgs {
  std::vector<std::string> scenarios;
  std::string broker;
  std::string cam;
  bool external_receiver = false;
  std::uint64_t seed = 1;
  std::string data;
  std::string model;
  std::size_t rows = 5000;
  int senders = 5;
  int requests = 20;
  int max_preparing = 1;
  long timeout_ms = 60000;
  unsigned workers = 0;
  std::size_t broker_buffer_mb = 2048;
  std::string report = "markdown";
  std::string out;
};

int Run(const RunArgs& a) {
  const auto format = bench::ParseReportFormat(a.report);
  std::vector<bench::ScenarioId> ids;
  for (const auto& s : a.scenarios) {
    if (s == "all") {
      for (auto id : {bench::ScenarioId::kOne, bench::ScenarioId::kTwo, bench::ScenarioId::kThree,
                      bench::ScenarioId::kFour, bench::ScenarioId::kHighSec}) {
        ids.push_back(id);
      }
    } else {
      ids.push_back(bench::ParseScenarioId(s));
    }
  }
  auto workload = bench::PrepareWorkload(a.data, a.seed, a.rows);
  if (!a.model.empty()) {
    // Rows still come from the data; the bundle must match what the
    // external receiver or CAM serves.
    workload.model = lr::ModelBundle::Load(a.model);
  }
  log::Info(kComponent, "workload",
            {{"source", workload.source},
             {"train_rows", std::to_string(workload.train_rows)},
             {"test_rows", std::to_string(workload.test.size())},
             {"plaintext_accuracy", std::to_string(workload.plaintext_accuracy)}});

  bench::RunConfig cfg;
  cfg.senders = a.senders;
  cfg.requests_per_sender = a.requests;
  cfg.max_preparing_per_sender = a.max_preparing;
  cfg.seed = a.seed;
  cfg.timeout = std::chrono::milliseconds(a.timeout_ms);
  cfg.topology.broker_address = a.broker;
  cfg.topology.cam_url = a.cam;
  cfg.topology.external_receiver = a.external_receiver;
  cfg.topology.receiver_workers = a.workers;
  cfg.topology.broker_session_buffer = a.broker_buffer_mb << 20;

  std::vector<bench::ResultsRow> rows;
  bool all_ok = true;
  for (auto id : ids) {
    auto result = bench::RunScenario(bench::SpecFor(id), workload.test, workload.model, cfg);
    rows.push_back(bench::Summarize(result));
    std::cerr << result.spec.label << ": " << result.records.size() << "/" << result.expected
              << " responses, lost=" << result.lost << " failed=" << result.failed
              << " wall_ms=" << result.wall_ms << " encrypted_accuracy=" << result.encrypted_accuracy
              << " plaintext_accuracy_same_rows=" << result.plaintext_accuracy
              << " decision_agreement=" << result.decision_agreement << "\n";
    for (const auto& f : result.failures) std::cerr << "  " << f << "\n";
    all_ok = all_ok && result.ok();
  }
  std::ofstream file;
  OpenOut(a.out, file) << bench::Report(rows, format);
  if (!all_ok) std::cerr << "one or more scenarios lost or failed requests\n";
  return all_ok ? 0 : 1;
}

int ServeBroker(const broker::BrokerConfig& cfg) {
  auto signals = BlockStopSignals();
  broker::Broker broker(cfg);
  broker.Start();
  WaitForSignal(signals);
  broker.Stop();
  return 0;
}

int ServeCam(const cam::CamConfig& cfg, const std::string& model_path) {
  auto signals = BlockStopSignals();
  auto engine = std::make_shared<const cam::AssessmentEngine>(lr::ModelBundle::Load(model_path));
  cam::CamServer server(cfg, engine);
  server.Start();
  log::Info(kComponent, "cam_listening", {{"url", server.url()}});
  WaitForSignal(signals);
  server.Stop();
  return 0;
}

int ServeReceiver(receiver::ReceiverConfig cfg, const std::string& broker_address, const std::string& mode) {
  if (mode == "local") {
    cfg.mode = receiver::Mode::kLocalCam;
  } else if (mode == "remote") {
    cfg.mode = receiver::Mode::kRemoteCam;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "mode must be local or remote");
  }
  std::tie(cfg.broker_host, cfg.broker_port) = mqtt::ParseHostPort(broker_address, 1883);
  auto signals = BlockStopSignals();
  receiver::Receiver recv(cfg);
  recv.Start();
  WaitForSignal(signals);
  recv.Stop();
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Homomorphically encrypted credit assessment over MQTT"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train the logistic-regression model and save the bundle");
  train_cmd->add_option("--data", train.data, "Credit risk CSV; synthetic data when omitted");
  train_cmd->add_option("--rows", train.rows, "Synthetic record count")->capture_default_str();
  train_cmd->add_option("--seed", train.seed)->capture_default_str();
  train_cmd->add_option("--test-ratio", train.test_ratio)->capture_default_str()->check(CLI::Range(0.01, 0.99));
  train_cmd->add_option("--epochs", train.epochs)->capture_default_str()->check(CLI::PositiveNumber);
  train_cmd->add_option("--learning-rate", train.learning_rate)->capture_default_str();
  train_cmd->add_option("--out", train.out, "Model bundle JSON")->capture_default_str();

  std::size_t synth_rows = 32581;
  std::uint64_t synth_seed = 1;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth-data", "Write a synthetic dataset in the credit risk CSV layout");
  synth_cmd->add_option("--rows", synth_rows)->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed)->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output path, stdout when omitted");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run benchmark scenarios and print a results table");
  run_cmd->add_option("--scenario", run.scenarios, "1, 2, 3, 4, highsec or all; repeatable")
      ->required()
      ->check(CLI::IsMember({"1", "2", "3", "4", "highsec", "all"}));
  run_cmd->add_option("--broker", run.broker, "host:port of an external broker");
  run_cmd->add_option("--cam", run.cam, "Base URL of an external CAM service");
  run_cmd->add_flag("--external-receiver", run.external_receiver, "A receiver is already attached to the broker");
  run_cmd->add_option("--seed", run.seed)->capture_default_str();
  run_cmd->add_option("--data", run.data, "Credit risk CSV; synthetic data when omitted");
  run_cmd->add_option("--model", run.model, "Model bundle JSON to use instead of training on --data");
  run_cmd->add_option("--rows", run.rows, "Synthetic record count")->capture_default_str();
  run_cmd->add_option("--senders", run.senders)->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_option("--requests", run.requests, "Requests per sender")->capture_default_str()->check(
      CLI::PositiveNumber);
  run_cmd->add_option("--max-preparing", run.max_preparing, "Concurrent encryptions per sender")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--timeout-ms", run.timeout_ms, "Per-request response timeout")->capture_default_str();
  run_cmd->add_option("--workers", run.workers, "Receiver and CAM pool size, 0 for one per core")
      ->capture_default_str();
  run_cmd->add_option("--broker-buffer-mb", run.broker_buffer_mb, "In-process broker buffer per session")
      ->capture_default_str();
  run_cmd->add_option("--report", run.report)->capture_default_str()->check(CLI::IsMember({"markdown", "csv"}));
  run_cmd->add_option("--out", run.out, "Report path, stdout when omitted");

  broker::BrokerConfig broker_cfg;
  std::size_t buffer_mb = broker_cfg.session_buffer_bytes >> 20;
  std::uint32_t max_payload_mb = broker_cfg.max_packet >> 20;
  auto* broker_cmd = app.add_subcommand("serve-broker", "Run the MQTT broker");
  broker_cmd->add_option("--bind", broker_cfg.bind_address)->capture_default_str();
  broker_cmd->add_option("--port", broker_cfg.port)->capture_default_str();
  broker_cmd->add_option("--max-payload-mb", max_payload_mb)->capture_default_str()->check(CLI::Range(1, 4095));
  broker_cmd->add_option("--buffer-mb", buffer_mb, "Outbound buffer per session")->capture_default_str();

  receiver::ReceiverConfig recv_cfg;
  std::string recv_broker = "127.0.0.1:1883";
  std::string recv_mode = "local";
  long cam_timeout_s = recv_cfg.cam_timeout.count();
  auto* recv_cmd = app.add_subcommand("serve-receiver", "Run the message receiver");
  recv_cmd->add_option("--broker", recv_broker)->capture_default_str();
  recv_cmd->add_option("--client-id", recv_cfg.client_id)->capture_default_str();
  recv_cmd->add_option("--topic", recv_cfg.request_topic)->capture_default_str();
  recv_cmd->add_option("--mode", recv_mode)->capture_default_str()->check(CLI::IsMember({"local", "remote"}));
  recv_cmd->add_option("--cam", recv_cfg.cam_url, "CAM base URL for remote mode");
  recv_cmd->add_option("--model", recv_cfg.model_path, "Model bundle JSON for local mode");
  recv_cmd->add_option("--workers", recv_cfg.workers)->capture_default_str();
  recv_cmd->add_option("--cam-timeout-s", cam_timeout_s)->capture_default_str();

  cam::CamConfig cam_cfg;
  std::string cam_model;
  std::size_t max_body_mb = cam_cfg.max_body_bytes >> 20;
  auto* cam_cmd = app.add_subcommand("serve-cam", "Run the HTTP credit assessment service");
  cam_cmd->add_option("--bind", cam_cfg.bind_address)->capture_default_str();
  cam_cmd->add_option("--port", cam_cfg.port)->capture_default_str();
  cam_cmd->add_option("--model", cam_model)->required();
  cam_cmd->add_option("--max-body-mb", max_body_mb)->capture_default_str()->check(CLI::Range(256, 4096));
  cam_cmd->add_option("--workers", cam_cfg.workers)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return Train(train);
    if (*synth_cmd) return SynthData(synth_rows, synth_seed, synth_out);
    if (*run_cmd) return Run(run);
    if (*broker_cmd) {
      broker_cfg.session_buffer_bytes = buffer_mb << 20;
      broker_cfg.max_packet = max_payload_mb << 20;
      return ServeBroker(broker_cfg);
    }
    if (*recv_cmd) {
      recv_cfg.cam_timeout = std::chrono::seconds(cam_timeout_s);
      return ServeReceiver(recv_cfg, recv_broker, recv_mode);
    }
    if (*cam_cmd) {
      cam_cfg.max_body_bytes = max_body_mb << 20;
      return ServeCam(cam_cfg, cam_model);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace
}  // namespace hecredit

int main(int argc, char** argv) { return hecredit::Main(argc, argv); }

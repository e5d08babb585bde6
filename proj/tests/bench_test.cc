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

#include <gtest/gtest.h>

#include "hecredit/bench/report.h"
#include "hecredit/bench/scenario.h"
#include "hecredit/broker/broker.h"
#include "hecredit/common/error.h"

namespace hecredit::bench {
namespace {

using std::chrono::milliseconds;

const Workload& SharedWorkload() {
  static const Workload w = PrepareWorkload("", 11, 3000);
  return w;
}

TEST(ScenarioSpecTest, KeysRoundTripAndModesMatchTopology) {
  for (auto id : {ScenarioId::kOne, ScenarioId::kTwo, ScenarioId::kThree, ScenarioId::kFour, ScenarioId::kHighSec}) {
    EXPECT_EQ(ParseScenarioId(ScenarioKey(id)), id);
  }
  EXPECT_EQ(SpecFor(ScenarioId::kOne).mode, receiver::Mode::kLocalCam);
  EXPECT_EQ(SpecFor(ScenarioId::kThree).mode, receiver::Mode::kLocalCam);
  EXPECT_EQ(SpecFor(ScenarioId::kTwo).mode, receiver::Mode::kRemoteCam);
  EXPECT_EQ(SpecFor(ScenarioId::kFour).mode, receiver::Mode::kRemoteCam);
  EXPECT_EQ(SpecFor(ScenarioId::kHighSec).mode, receiver::Mode::kRemoteCam);
  EXPECT_EQ(SpecFor(ScenarioId::kThree).params.poly_degree, 4096u);
  EXPECT_EQ(SpecFor(ScenarioId::kHighSec).params.poly_degree, 8192u);
  EXPECT_THROW(ParseScenarioId("5"), Error);
  EXPECT_THROW(ParseScenarioId(""), Error);
}

ResultsRow SampleRow(std::string label) {
  ResultsRow r;
  r.scenario = std::move(label);
  r.round_trip_ms = 1834.126;
  r.start_send_ms = 212.5;
  r.send_receive_ms = 1500.25;
  r.receive_end_ms = 121.376;
  r.receiver_ms = 1400.0;
  r.server_ms = 1300.5;
  r.accuracy_pct = 84.75;
  r.payload_mb = 2.345678;
  return r;
}

TEST(ReportTest, MarkdownHasHeaderAndOneLinePerRow) {
  std::vector<ResultsRow> rows = {SampleRow("Scenario 3")};
  auto md = Report(rows, ReportFormat::kMarkdown);
  EXPECT_EQ(md,
            "| Scenario | Round-trip | Start-Send | Send-Receive | Receive-End | Message-Receiver | Server Application "
            "| Prediction | Payload (MB) |\n"
            "|---|---:|---:|---:|---:|---:|---:|---:|---:|\n"
            "| Scenario 3 | 1834.13 | 212.50 | 1500.25 | 121.38 | 1400.00 | 1300.50 | 84.8% | 2.346 |\n");
}

TEST(ReportTest, CsvQuotesLabelsAndParsesBack) {
  std::vector<ResultsRow> rows = {SampleRow("Scenario 2 (HTTP CAM, N=4096)"), SampleRow("plain")};
  auto csv = Report(rows, ReportFormat::kCsv);
  EXPECT_NE(csv.find("\"Scenario 2 (HTTP CAM, N=4096)\","), std::string::npos);
  auto parsed = ParseCsvReport(csv);
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(parsed, rows);
  EXPECT_EQ(Report(parsed, ReportFormat::kCsv), csv);
}

TEST(ReportTest, RejectsMalformedCsvAndFormats) {
  EXPECT_THROW(ParseCsvReport(""), Error);
  EXPECT_THROW(ParseCsvReport("a,b\r\n"), Error);
  auto csv = Report(std::vector<ResultsRow>{SampleRow("x")}, ReportFormat::kCsv);
  auto bad = csv.substr(0, csv.rfind(',')) + ",abc\r\n";
  EXPECT_THROW(ParseCsvReport(bad), Error);
  std::vector<ResultsRow> quoted = {SampleRow("say \"hi\"")};
  EXPECT_THROW(Report(quoted, ReportFormat::kCsv), Error);
  EXPECT_EQ(ParseReportFormat("csv"), ReportFormat::kCsv);
  EXPECT_EQ(ParseReportFormat("markdown"), ReportFormat::kMarkdown);
  EXPECT_THROW(ParseReportFormat("html"), Error);
}

TEST(ReportTest, SummarizeTakesMeans) {
  ScenarioResult res;
  res.spec = SpecFor(ScenarioId::kOne);
  auto t = std::chrono::steady_clock::now();
  for (int k = 1; k <= 2; ++k) {
    envelope::TimingRecord r;
    r.t_start = t;
    r.t_send = t + milliseconds(10 * k);
    r.t_receive = r.t_send + milliseconds(100 * k);
    r.t_end = r.t_receive + milliseconds(5 * k);
    r.t_receiver_ms = 90.0 * k;
    r.t_server_ms = 80.0 * k;
    res.records.push_back(r);
  }
  res.encrypted_accuracy = 0.5;
  res.mean_payload_bytes = 2.5e6;
  auto row = Summarize(res);
  EXPECT_EQ(row.scenario, res.spec.label);
  EXPECT_NEAR(row.start_send_ms, 15, 1e-9);
  EXPECT_NEAR(row.send_receive_ms, 150, 1e-9);
  EXPECT_NEAR(row.receive_end_ms, 7.5, 1e-9);
  EXPECT_NEAR(row.round_trip_ms, 172.5, 1e-9);
  EXPECT_NEAR(row.receiver_ms, 135, 1e-9);
  EXPECT_NEAR(row.server_ms, 120, 1e-9);
  EXPECT_DOUBLE_EQ(row.accuracy_pct, 50);
  EXPECT_DOUBLE_EQ(row.payload_mb, 2.5);
  EXPECT_EQ(Summarize(ScenarioResult{}).round_trip_ms, 0.0);
}

TEST(WorkloadTest, SyntheticWorkloadTrainsAUsefulModel) {
  const auto& w = SharedWorkload();
  EXPECT_EQ(w.test.size() + w.train_rows, 3000u);
  EXPECT_NEAR(static_cast<double>(w.test.size()) / 3000.0, data::kDefaultTestRatio, 0.01);
  EXPECT_GT(w.plaintext_accuracy, 0.7);
  EXPECT_EQ(w.model.weights.size(), 26u);
}

void ExpectHealthy(const ScenarioResult& r, std::size_t expected) {
  for (const auto& f : r.failures) ADD_FAILURE() << f;
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.records.size(), expected);
  EXPECT_EQ(r.unmatched_ids, 0u);
  for (const auto& rec : r.records) {
    EXPECT_TRUE(rec.Monotonic()) << rec.correlation_id;
    EXPECT_GT(rec.t_server_ms, 0.0);
  }
  // Same weights on both paths; only a row within noise of p=0.5 could flip.
  EXPECT_EQ(r.decision_agreement, 1.0);
  EXPECT_NEAR(r.encrypted_accuracy, r.plaintext_accuracy, 1e-12);
  EXPECT_GT(r.mean_payload_bytes, 1e6);
}

TEST(RunScenarioTest, LocalCamLoopback) {
  RunConfig cfg;
  cfg.senders = 2;
  cfg.requests_per_sender = 3;
  auto r = RunScenario(SpecFor(ScenarioId::kThree), SharedWorkload().test, SharedWorkload().model, cfg);
  ExpectHealthy(r, 6);
}

TEST(RunScenarioTest, RemoteCamLoopbackAddsHttpHop) {
  RunConfig cfg;
  cfg.senders = 2;
  cfg.requests_per_sender = 2;
  auto r = RunScenario(SpecFor(ScenarioId::kTwo), SharedWorkload().test, SharedWorkload().model, cfg);
  ExpectHealthy(r, 4);
  for (const auto& rec : r.records) EXPECT_GT(rec.t_receiver_ms, rec.t_server_ms);
}

TEST(RunScenarioTest, ExternalBrokerAndHooks) {
  broker::BrokerConfig bc;
  bc.port = 0;
  broker::Broker broker(bc);
  broker.Start();
  RunConfig cfg;
  cfg.senders = 1;
  cfg.requests_per_sender = 2;
  cfg.topology.broker_address = "127.0.0.1:" + std::to_string(broker.port());
  int sessions = 0, requests = 0;
  Hooks hooks;
  hooks.on_session = [&](const sdk::Session& s) {
    ++sessions;
    EXPECT_EQ(s.sender_id(), "MS_1");
  };
  std::mutex mu;
  hooks.on_request = [&](const sdk::PreparedRequest& p, std::span<const double> raw) {
    std::lock_guard lock(mu);
    ++requests;
    EXPECT_EQ(raw.size(), 26u);
    EXPECT_FALSE(p.wire.empty());
  };
  auto r = RunScenario(SpecFor(ScenarioId::kOne), SharedWorkload().test, SharedWorkload().model, cfg, hooks);
  ExpectHealthy(r, 2);
  EXPECT_EQ(sessions, 1);
  EXPECT_EQ(requests, 2);
  EXPECT_GE(broker.stats().publishes_in, 4u);
  broker.Stop();
}

TEST(RunScenarioTest, MissingReceiverCountsLosses) {
  RunConfig cfg;
  cfg.senders = 1;
  cfg.requests_per_sender = 2;
  cfg.timeout = milliseconds(300);
  cfg.topology.external_receiver = true;
  auto r = RunScenario(SpecFor(ScenarioId::kThree), SharedWorkload().test, SharedWorkload().model, cfg);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.lost, 2u);
  EXPECT_TRUE(r.records.empty());
}

TEST(RunScenarioTest, RejectsBadConfig) {
  RunConfig cfg;
  cfg.senders = 0;
  EXPECT_THROW(RunScenario(SpecFor(ScenarioId::kThree), SharedWorkload().test, SharedWorkload().model, cfg), Error);
  EXPECT_THROW(RunScenario(SpecFor(ScenarioId::kThree), {}, SharedWorkload().model, RunConfig{}), Error);
}

}  // namespace
}  // namespace hecredit::bench

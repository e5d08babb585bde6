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

#include "hecredit/bench/report.h"

#include <fmt/format.h>

#include <boost/tokenizer.hpp>
#include <array>
#include <charconv>
#include <sstream>

#include "hecredit/common/error.h"

namespace hecredit::bench {

namespace {

constexpr std::array<std::string_view, 9> kColumns = {
    "Scenario",         "Round-trip",         "Start-Send", "Send-Receive", "Receive-End",
    "Message-Receiver", "Server Application", "Prediction", "Payload (MB)"};

template <typename F>
double MeanOf(const std::vector<envelope::TimingRecord>& records, F f) {
  if (records.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : records) sum += f(r);
  return sum / static_cast<double>(records.size());
}

std::string CsvField(const std::string& s) {
  if (s.find('"') != std::string::npos) throw Error(ErrorCode::kInvalidArgument, "scenario label contains a quote");
  if (s.find_first_of(",\r\n") == std::string::npos) return s;
  return "\"" + s + "\"";
}

double ParseDouble(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw Error(ErrorCode::kParse, "bad number in report: " + s);
  return v;
}

}  // namespace

ResultsRow Summarize(const ScenarioResult& result) {
  const auto& rs = result.records;
  ResultsRow row;
  row.scenario = result.spec.label;
  row.round_trip_ms = MeanOf(rs, [](const auto& r) { return r.round_trip_ms(); });
  row.start_send_ms = MeanOf(rs, [](const auto& r) { return r.start_send_ms(); });
  row.send_receive_ms = MeanOf(rs, [](const auto& r) { return r.send_receive_ms(); });
  row.receive_end_ms = MeanOf(rs, [](const auto& r) { return r.receive_end_ms(); });
  row.receiver_ms = MeanOf(rs, [](const auto& r) { return r.t_receiver_ms; });
  row.server_ms = MeanOf(rs, [](const auto& r) { return r.t_server_ms; });
  row.accuracy_pct = 100.0 * result.encrypted_accuracy;
  row.payload_mb = result.mean_payload_bytes / 1e6;
  return row;
}

ReportFormat ParseReportFormat(std::string_view text) {
  if (text == "markdown") return ReportFormat::kMarkdown;
  if (text == "csv") return ReportFormat::kCsv;
  throw Error(ErrorCode::kInvalidArgument, "unknown report format: " + std::string(text));
}

std::string Report(std::span<const ResultsRow> rows, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::kMarkdown) {
    out += "|";
    for (auto c : kColumns) out += fmt::format(" {} |", c);
    out += "\n|";
    for (std::size_t i = 0; i < kColumns.size(); ++i) out += i == 0 ? "---|" : "---:|";
    out += "\n";
    for (const auto& r : rows) {
      out += fmt::format("| {} | {:.2f} | {:.2f} | {:.2f} | {:.2f} | {:.2f} | {:.2f} | {:.1f}% | {:.3f} |\n", r.scenario,
                         r.round_trip_ms, r.start_send_ms, r.send_receive_ms, r.receive_end_ms, r.receiver_ms,
                         r.server_ms, r.accuracy_pct, r.payload_mb);
    }
    return out;
  }
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (i) out += ",";
    out += CsvField(std::string(kColumns[i]));
  }
  out += "\r\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.3f},{:.2f},{:.6f}\r\n", CsvField(r.scenario),
                       r.round_trip_ms, r.start_send_ms, r.send_receive_ms, r.receive_end_ms, r.receiver_ms,
                       r.server_ms, r.accuracy_pct, r.payload_mb);
  }
  return out;
}

std::vector<ResultsRow> ParseCsvReport(std::string_view csv) {
  using Separator = boost::escaped_list_separator<char>;
  std::istringstream in{std::string(csv)};
  std::string line;
  std::vector<ResultsRow> rows;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    boost::tokenizer<Separator> tok(line, Separator('\0', ',', '"'));
    std::vector<std::string> f(tok.begin(), tok.end());
    if (f.size() != kColumns.size()) throw Error(ErrorCode::kParse, "report row has wrong column count");
    if (header) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] != kColumns[i]) throw Error(ErrorCode::kParse, "unexpected report header: " + f[i]);
      }
      header = false;
      continue;
    }
    ResultsRow r;
    r.scenario = f[0];
    r.round_trip_ms = ParseDouble(f[1]);
    r.start_send_ms = ParseDouble(f[2]);
    r.send_receive_ms = ParseDouble(f[3]);
    r.receive_end_ms = ParseDouble(f[4]);
    r.receiver_ms = ParseDouble(f[5]);
    r.server_ms = ParseDouble(f[6]);
    r.accuracy_pct = ParseDouble(f[7]);
    r.payload_mb = ParseDouble(f[8]);
    rows.push_back(std::move(r));
  }
  if (header) throw Error(ErrorCode::kParse, "empty report");
  return rows;
}

}  // namespace hecredit::bench

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

#ifndef HECREDIT_BENCH_REPORT_H_
#define HECREDIT_BENCH_REPORT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hecredit/bench/scenario.h"

namespace hecredit::bench {

// Means over the successful requests of one scenario, in milliseconds.
struct ResultsRow {
  std::string scenario;
  double round_trip_ms = 0.0;
  double start_send_ms = 0.0;
  double send_receive_ms = 0.0;
  double receive_end_ms = 0.0;
  double receiver_ms = 0.0;
  double server_ms = 0.0;
  double accuracy_pct = 0.0;
  double payload_mb = 0.0;  // 10^6 bytes of PUBLISH payload per request
  friend bool operator==(const ResultsRow&, const ResultsRow&) = default;
};

ResultsRow Summarize(const ScenarioResult& result);

enum class ReportFormat { kMarkdown, kCsv };
// Throws kInvalidArgument for anything but "markdown" or "csv".
ReportFormat ParseReportFormat(std::string_view text);

// Columns: Scenario | Round-trip | Start-Send | Send-Receive | Receive-End |
// Message-Receiver | Server Application | Prediction | Payload (MB).
// Values are printed with fixed precision so the CSV parses back exactly.
std::string Report(std::span<const ResultsRow> rows, ReportFormat format);
// Inverse of Report(kCsv). Throws kParse.
std::vector<ResultsRow> ParseCsvReport(std::string_view csv);

}  // namespace hecredit::bench

#endif  // HECREDIT_BENCH_REPORT_H_

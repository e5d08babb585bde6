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

#ifndef HECREDIT_DATA_DATASET_H_
#define HECREDIT_DATA_DATASET_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hecredit/lr/model.h"

namespace hecredit::data {

// One row of the credit-risk CSV. Unparseable or empty cells are nullopt.
struct RawRecord {
  std::optional<double> age;
  std::optional<double> income;
  std::optional<std::string> home_ownership;
  std::optional<double> emp_length;
  std::optional<std::string> loan_intent;
  std::optional<std::string> loan_grade;
  std::optional<double> loan_amount;
  std::optional<double> interest_rate;
  std::optional<int> loan_status;
  std::optional<double> percent_income;
  std::optional<std::string> default_on_file;
  std::optional<double> credit_history_length;

  bool complete() const;
  friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

struct FeatureRow {
  std::vector<double> values;
  int label = 0;
};

struct NormalizationStats {
  std::vector<double> means;
  std::vector<double> stds;
};

struct Split {
  std::vector<FeatureRow> train;
  std::vector<FeatureRow> test;
};

struct SyntheticData {
  std::vector<RawRecord> records;
  // Generating model on the normalized 26 features, with the sample's
  // normalization statistics.
  lr::ModelBundle truth;
};

inline constexpr double kStdFloor = 1e-6;
// Sized so the cleaned public dataset yields roughly 12,400 held-out rows.
inline constexpr double kDefaultTestRatio = 0.4332;

// Throws kSchema when a required column is absent, kIo when unreadable.
std::vector<RawRecord> ParseCsv(std::istream& in);
std::vector<RawRecord> LoadCsv(const std::string& path);
void WriteCsv(std::ostream& out, std::span<const RawRecord> records);

// Drops incomplete rows and outliers (age > 100 or employment length > 60).
std::vector<RawRecord> Clean(std::span<const RawRecord> records);

// Throws kSchema on an unknown category, kInvalidArgument on incomplete rows.
std::vector<double> ExpandRecord(const RawRecord& record);
std::vector<FeatureRow> ExpandFeatures(std::span<const RawRecord> records);

NormalizationStats FitNormalization(std::span<const FeatureRow> rows);
std::vector<double> Normalize(std::span<const double> values, const NormalizationStats& stats);
std::vector<double> Denormalize(std::span<const double> z, const NormalizationStats& stats);

Split SplitRows(std::vector<FeatureRow> rows, double test_ratio, std::uint64_t seed);

SyntheticData Synthesize(std::size_t n, std::uint64_t seed);

// Fits normalization and weights on the given rows. The bundle carries the
// schema hash.
lr::ModelBundle FitModel(std::span<const FeatureRow> train, const lr::TrainConfig& cfg);
double Accuracy(std::span<const FeatureRow> rows, const lr::ModelBundle& model);

}  // namespace hecredit::data

#endif  // HECREDIT_DATA_DATASET_H_

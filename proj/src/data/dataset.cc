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

#include "hecredit/data/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

#include <boost/tokenizer.hpp>

#include "hecredit/common/error.h"
#include "hecredit/data/schema.h"
#include "hecredit/ring/random.h"

namespace hecredit::data {

namespace {

const std::vector<std::string>& CsvColumns() {
  static const std::vector<std::string> kColumns = {
      "person_age",  "person_income", "person_home_ownership", "person_emp_length",
      "loan_intent", "loan_grade",    "loan_amnt",             "loan_int_rate",
      "loan_status", "loan_percent_income", "cb_person_default_on_file", "cb_person_cred_hist_length"};
  return kColumns;
}

std::string Trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::optional<double> ParseNumber(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::string> ParseText(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  using Separator = boost::escaped_list_separator<char>;
  // Backslash is not an escape in this format; use a character that cannot appear.
  boost::tokenizer<Separator> tok(line, Separator('\0', ',', '"'));
  std::vector<std::string> out;
  for (const auto& t : tok) out.push_back(Trim(t));
  return out;
}

std::string FormatNumber(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

bool RawRecord::complete() const {
  return age && income && home_ownership && emp_length && loan_intent && loan_grade && loan_amount &&
         interest_rate && loan_status && percent_income && default_on_file && credit_history_length;
}

std::vector<RawRecord> ParseCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kSchema, "missing CSV header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  try {
    header = SplitCsvLine(line);
  } catch (const boost::escaped_list_error& e) {
    throw Error(ErrorCode::kParse, std::string("CSV header: ") + e.what());
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(header[i], i);
  std::vector<std::size_t> col;
  for (const auto& name : CsvColumns()) {
    auto it = index.find(name);
    if (it == index.end()) throw Error(ErrorCode::kSchema, "missing column " + name);
    col.push_back(it->second);
  }
  std::vector<RawRecord> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    std::vector<std::string> f;
    try {
      f = SplitCsvLine(line);
    } catch (const boost::escaped_list_error&) {
      // Malformed quoting: keep the row, every field missing.
    }
    auto cell = [&](std::size_t c) { return col[c] < f.size() ? f[col[c]] : std::string(); };
    RawRecord r;
    r.age = ParseNumber(cell(0));
    r.income = ParseNumber(cell(1));
    r.home_ownership = ParseText(cell(2));
    r.emp_length = ParseNumber(cell(3));
    r.loan_intent = ParseText(cell(4));
    r.loan_grade = ParseText(cell(5));
    r.loan_amount = ParseNumber(cell(6));
    r.interest_rate = ParseNumber(cell(7));
    if (auto s = ParseNumber(cell(8)); s && (*s == 0 || *s == 1)) r.loan_status = static_cast<int>(*s);
    r.percent_income = ParseNumber(cell(9));
    r.default_on_file = ParseText(cell(10));
    r.credit_history_length = ParseNumber(cell(11));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RawRecord> LoadCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  return ParseCsv(in);
}

void WriteCsv(std::ostream& out, std::span<const RawRecord> records) {
  const auto& cols = CsvColumns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  auto num = [](const std::optional<double>& v) { return v ? FormatNumber(*v) : std::string(); };
  auto text = [](const std::optional<std::string>& v) { return v.value_or(""); };
  for (const auto& r : records) {
    out << num(r.age) << ',' << num(r.income) << ',' << text(r.home_ownership) << ',' << num(r.emp_length) << ','
        << text(r.loan_intent) << ',' << text(r.loan_grade) << ',' << num(r.loan_amount) << ','
        << num(r.interest_rate) << ',' << (r.loan_status ? std::to_string(*r.loan_status) : "") << ','
        << num(r.percent_income) << ',' << text(r.default_on_file) << ',' << num(r.credit_history_length)
        << "\n";
  }
}

std::vector<RawRecord> Clean(std::span<const RawRecord> records) {
  std::vector<RawRecord> out;
  for (const auto& r : records) {
    if (!r.complete()) continue;
    if (*r.age > 100 || *r.emp_length > 60) continue;
    out.push_back(r);
  }
  return out;
}

std::vector<double> ExpandRecord(const RawRecord& r) {
  if (!r.complete()) throw Error(ErrorCode::kInvalidArgument, "cannot expand an incomplete record");
  std::vector<double> v = {*r.age,           *r.income,         *r.emp_length,           *r.loan_amount,
                           *r.interest_rate, *r.percent_income, *r.credit_history_length};
  const std::string* cats[] = {&*r.home_ownership, &*r.loan_intent, &*r.loan_grade, &*r.default_on_file};
  const auto& blocks = CategoryBlocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& values = blocks[b].values;
    auto it = std::find(values.begin(), values.end(), *cats[b]);
    if (it == values.end()) {
      throw Error(ErrorCode::kSchema, "unknown " + blocks[b].column + " value '" + *cats[b] + "'");
    }
    for (const auto& value : values) v.push_back(value == *cats[b] ? 1.0 : 0.0);
  }
  return v;
}

std::vector<FeatureRow> ExpandFeatures(std::span<const RawRecord> records) {
  std::vector<FeatureRow> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back({ExpandRecord(r), *r.loan_status});
  return rows;
}

NormalizationStats FitNormalization(std::span<const FeatureRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot fit normalization on no rows");
  const std::size_t d = rows.front().values.size();
  NormalizationStats s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  for (const auto& r : rows) {
    if (r.values.size() != d) throw Error(ErrorCode::kShapeMismatch, "rows differ in width");
    for (std::size_t i = 0; i < d; ++i) s.means[i] += r.values[i];
  }
  const double n = static_cast<double>(rows.size());
  for (auto& m : s.means) m /= n;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < d; ++i) s.stds[i] += (r.values[i] - s.means[i]) * (r.values[i] - s.means[i]);
  }
  for (auto& v : s.stds) v = std::max(std::sqrt(v / n), kStdFloor);
  return s;
}

std::vector<double> Normalize(std::span<const double> values, const NormalizationStats& stats) {
  if (values.size() != stats.means.size()) throw Error(ErrorCode::kShapeMismatch, "width mismatch");
  std::vector<double> z(values.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = (values[i] - stats.means[i]) / stats.stds[i];
  return z;
}

std::vector<double> Denormalize(std::span<const double> z, const NormalizationStats& stats) {
  if (z.size() != stats.means.size()) throw Error(ErrorCode::kShapeMismatch, "width mismatch");
  std::vector<double> v(z.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = z[i] * stats.stds[i] + stats.means[i];
  return v;
}

Split SplitRows(std::vector<FeatureRow> rows, double test_ratio, std::uint64_t seed) {
  if (!(test_ratio >= 0 && test_ratio < 1)) throw Error(ErrorCode::kInvalidArgument, "test ratio must be in [0, 1)");
  auto rng = ring::RandomSource::FromSeed(seed);
  std::shuffle(rows.begin(), rows.end(), rng);
  const auto test_count = static_cast<std::size_t>(std::llround(test_ratio * static_cast<double>(rows.size())));
  Split s;
  s.test.assign(std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.begin() + test_count));
  s.train.assign(std::make_move_iterator(rows.begin() + test_count), std::make_move_iterator(rows.end()));
  return s;
}

lr::ModelBundle FitModel(std::span<const FeatureRow> train, const lr::TrainConfig& cfg) {
  NormalizationStats stats = FitNormalization(train);
  const auto n = static_cast<Eigen::Index>(train.size());
  const auto d = static_cast<Eigen::Index>(stats.means.size());
  Eigen::MatrixXd x(n, d);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto z = Normalize(train[i].values, stats);
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = z[j];
    y[i] = train[i].label;
  }
  auto result = lr::Train(x, y, cfg);
  lr::ModelBundle m;
  m.weights.assign(result.weights.data(), result.weights.data() + d);
  m.bias = result.bias;
  m.feature_means = stats.means;
  m.feature_stds = stats.stds;
  m.feature_schema_hash = SchemaHash();
  return m;
}

double Accuracy(std::span<const FeatureRow> rows, const lr::ModelBundle& model) {
  if (rows.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& r : rows) correct += (lr::Decision(lr::PredictPlain(r.values, model)) ? 1 : 0) == r.label;
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

}  // namespace hecredit::data

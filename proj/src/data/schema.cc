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

#include "hecredit/data/schema.h"

#include <array>
#include <cstdio>

#include <nlohmann/json.hpp>
#include <sodium.h>

#include "hecredit/common/error.h"

namespace hecredit::data {

const std::vector<std::string>& NumericColumns() {
  static const std::vector<std::string> kColumns = {
      "person_age",    "person_income",       "person_emp_length",         "loan_amnt",
      "loan_int_rate", "loan_percent_income", "cb_person_cred_hist_length"};
  return kColumns;
}

const std::vector<CategoryBlock>& CategoryBlocks() {
  static const std::vector<CategoryBlock> kBlocks = {
      {"person_home_ownership", {"RENT", "OWN", "MORTGAGE", "OTHER"}},
      {"loan_intent", {"EDUCATION", "MEDICAL", "VENTURE", "PERSONAL", "DEBTCONSOLIDATION", "HOMEIMPROVEMENT"}},
      {"loan_grade", {"A", "B", "C", "D", "E", "F", "G"}},
      {"cb_person_default_on_file", {"N", "Y"}},
  };
  return kBlocks;
}

const std::vector<std::string>& FeatureNames() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> names = NumericColumns();
    for (const auto& block : CategoryBlocks()) {
      for (const auto& v : block.values) names.push_back(block.column + "=" + v);
    }
    return names;
  }();
  return kNames;
}

std::size_t BlockOffset(std::size_t block) {
  std::size_t offset = kNumericCount;
  for (std::size_t b = 0; b < block; ++b) offset += CategoryBlocks()[b].values.size();
  return offset;
}

std::string SchemaJson() {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : CategoryBlocks()) blocks.push_back({{"column", b.column}, {"values", b.values}});
  nlohmann::json j = {{"version", 1},
                      {"numeric", NumericColumns()},
                      {"categorical", blocks},
                      {"features", FeatureNames()},
                      {"target", "loan_status"}};
  return j.dump();
}

std::string SchemaHash() {
  if (sodium_init() < 0) throw Error(ErrorCode::kInternal, "libsodium failed to initialize");
  const std::string text = SchemaJson();
  std::array<unsigned char, crypto_hash_sha256_BYTES> digest{};
  crypto_hash_sha256(digest.data(), reinterpret_cast<const unsigned char*>(text.data()), text.size());
  std::string hex(2 * digest.size() + 1, '\0');
  sodium_bin2hex(hex.data(), hex.size(), digest.data(), digest.size());
  hex.pop_back();
  return hex;
}

}  // namespace hecredit::data

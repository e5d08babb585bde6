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

#ifndef HECREDIT_DATA_SCHEMA_H_
#define HECREDIT_DATA_SCHEMA_H_

#include <cstddef>
#include <string>
#include <vector>

namespace hecredit::data {

inline constexpr std::size_t kNumericCount = 7;
inline constexpr std::size_t kFeatureCount = 26;

struct CategoryBlock {
  std::string column;
  std::vector<std::string> values;
};

// Feature order: the seven numeric columns, then one indicator per category
// value, block by block in CategoryBlocks() order.
const std::vector<std::string>& NumericColumns();
const std::vector<CategoryBlock>& CategoryBlocks();
const std::vector<std::string>& FeatureNames();

// Index of the first indicator of a block within the feature vector.
std::size_t BlockOffset(std::size_t block);

// Canonical JSON (sorted keys, compact) and its SHA-256 in lowercase hex.
std::string SchemaJson();
std::string SchemaHash();

}  // namespace hecredit::data

#endif  // HECREDIT_DATA_SCHEMA_H_

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

#include <algorithm>
#include <cmath>
#include <random>

#include "hecredit/common/error.h"
#include "hecredit/data/dataset.h"
#include "hecredit/data/schema.h"
#include "hecredit/ring/random.h"

namespace hecredit::data {

namespace {

// Generating weights on z-scored features, in FeatureNames() order. Chosen to
// resemble the sign pattern of models fit on the public dataset.
constexpr double kTruthWeights[kFeatureCount] = {
    -0.10, -0.60, -0.10, 0.20, 0.50, 1.00, 0.00,           // numeric
    0.50, -0.60, -0.30, 0.10,                              // home
    -0.20, 0.20, -0.30, 0.00, 0.25, 0.10,                  // intent
    -0.50, -0.30, 0.00, 0.40, 0.30, 0.20, 0.10,            // grade
    -0.10, 0.10};                                          // prior default
constexpr double kTruthBias = -1.3;

template <typename T>
const T& Pick(const std::vector<T>& values, const std::vector<double>& weights, ring::RandomSource& rng) {
  std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
  return values[dist(rng)];
}

RawRecord DrawRecord(ring::RandomSource& rng) {
  const auto& blocks = CategoryBlocks();
  std::exponential_distribution<double> age_tail(1.0 / 8.0);
  std::lognormal_distribution<double> income(std::log(55000.0), 0.5);
  std::geometric_distribution<int> emp(1.0 / 5.5);
  std::lognormal_distribution<double> amount(std::log(8000.0), 0.6);
  std::normal_distribution<double> rate_noise(0.0, 1.0);
  std::bernoulli_distribution prior_default(0.18);

  RawRecord r;
  const double age = std::min(20.0 + std::floor(age_tail(rng)), 90.0);
  r.age = age;
  const double inc = std::round(std::clamp(income(rng), 4000.0, 2'000'000.0));
  r.income = inc;
  r.home_ownership = Pick(blocks[0].values, {0.50, 0.08, 0.39, 0.03}, rng);
  r.emp_length = std::min<double>(emp(rng), age - 16.0);
  r.loan_intent = Pick(blocks[1].values, {0.20, 0.19, 0.17, 0.17, 0.16, 0.11}, rng);
  const std::vector<double> grade_p = {0.32, 0.31, 0.19, 0.10, 0.04, 0.02, 0.02};
  std::discrete_distribution<std::size_t> grade(grade_p.begin(), grade_p.end());
  const std::size_t g = grade(rng);
  r.loan_grade = blocks[2].values[g];
  const double amt = std::round(std::clamp(amount(rng), 500.0, 35000.0) / 25.0) * 25.0;
  r.loan_amount = amt;
  r.interest_rate = std::round((7.5 + 3.0 * static_cast<double>(g) + rate_noise(rng)) * 100.0) / 100.0;
  r.percent_income = std::round(amt / inc * 100.0) / 100.0;
  r.default_on_file = prior_default(rng) ? "Y" : "N";
  const int max_hist = static_cast<int>(std::clamp(age - 18.0, 2.0, 30.0));
  r.credit_history_length = static_cast<double>(std::uniform_int_distribution<int>(2, max_hist)(rng));
  return r;
}

}  // namespace

SyntheticData Synthesize(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "synthesize needs at least one record");
  auto rng = ring::RandomSource::FromSeed(seed);
  SyntheticData out;
  out.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.records.push_back(DrawRecord(rng));

  auto rows = ExpandFeatures([&] {
    auto copy = out.records;
    for (auto& r : copy) r.loan_status = 0;
    return copy;
  }());
  NormalizationStats stats = FitNormalization(rows);

  // Within a one-hot block sum_k std_k * z_k is constant, so weights along
  // (std_k) only shift the bias. Remove that direction so the generating
  // weights are the identifiable ones a fit can recover.
  std::vector<double> w(std::begin(kTruthWeights), std::end(kTruthWeights));
  double bias = kTruthBias;
  for (std::size_t b = 0; b < CategoryBlocks().size(); ++b) {
    const std::size_t off = BlockOffset(b);
    const std::size_t k = CategoryBlocks()[b].values.size();
    double dot = 0, norm = 0, mean_term = 0;
    for (std::size_t j = off; j < off + k; ++j) {
      dot += w[j] * stats.stds[j];
      norm += stats.stds[j] * stats.stds[j];
    }
    const double c = dot / norm;
    for (std::size_t j = off; j < off + k; ++j) {
      w[j] -= c * stats.stds[j];
      mean_term += stats.means[j];
    }
    // Removed part contributed c * sum(std*z) = c * (1 - sum(mean)).
    bias += c * (1.0 - mean_term);
  }

  out.truth.weights = w;
  out.truth.bias = bias;
  out.truth.feature_means = stats.means;
  out.truth.feature_stds = stats.stds;
  out.truth.feature_schema_hash = SchemaHash();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = lr::PredictPlain(rows[i].values, out.truth);
    out.records[i].loan_status = u(rng) < p ? 1 : 0;
  }
  return out;
}

}  // namespace hecredit::data

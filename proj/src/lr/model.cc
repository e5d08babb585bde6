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

#include "hecredit/lr/model.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hecredit/common/error.h"

namespace hecredit::lr {

using nlohmann::json;

void ModelBundle::Validate() const {
  const std::size_t d = weights.size();
  if (d == 0) throw Error(ErrorCode::kSchema, "model has no weights");
  if (feature_means.size() != d || feature_stds.size() != d) {
    throw Error(ErrorCode::kSchema, "weights, means and stds must share one dimension");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!(feature_stds[i] > 0) || !std::isfinite(feature_stds[i])) {
      throw Error(ErrorCode::kSchema, "feature std must be positive at index " + std::to_string(i));
    }
    if (!std::isfinite(weights[i]) || !std::isfinite(feature_means[i])) {
      throw Error(ErrorCode::kSchema, "non-finite model value at index " + std::to_string(i));
    }
  }
  if (!std::isfinite(bias)) throw Error(ErrorCode::kSchema, "non-finite bias");
}

std::string ModelBundle::ToJson() const {
  json j = {{"weights", weights},
            {"bias", bias},
            {"feature_means", feature_means},
            {"feature_stds", feature_stds},
            {"feature_schema_hash", feature_schema_hash}};
  return j.dump(2);
}

ModelBundle ModelBundle::FromJson(const std::string& text) {
  ModelBundle m;
  try {
    json j = json::parse(text);
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.feature_means = j.at("feature_means").get<std::vector<double>>();
    m.feature_stds = j.at("feature_stds").get<std::vector<double>>();
    m.feature_schema_hash = j.at("feature_schema_hash").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("model bundle: ") + e.what());
  }
  m.Validate();
  return m;
}

void ModelBundle::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << ToJson() << "\n";
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

ModelBundle ModelBundle::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return FromJson(ss.str());
}

double Sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

std::vector<double> Normalize(std::span<const double> raw, const ModelBundle& model) {
  if (raw.size() != model.dimension()) {
    throw Error(ErrorCode::kShapeMismatch, "feature vector has " + std::to_string(raw.size()) +
                                               " entries, model expects " + std::to_string(model.dimension()));
  }
  std::vector<double> z(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) z[i] = (raw[i] - model.feature_means[i]) / model.feature_stds[i];
  return z;
}

double LogitPlain(std::span<const double> raw, const ModelBundle& model) {
  auto z = Normalize(raw, model);
  double t = model.bias;
  for (std::size_t i = 0; i < z.size(); ++i) t += model.weights[i] * z[i];
  return t;
}

double PredictPlain(std::span<const double> raw, const ModelBundle& model) { return Sigmoid(LogitPlain(raw, model)); }

ckks::Ciphertext EvaluateEncrypted(const ckks::Ciphertext& ct, const ModelBundle& model,
                                   const ckks::PublicContext& pub) {
  if (ct.level() < 1) throw Error(ErrorCode::kOutOfRange, "no modulus level left for the weight product");
  const auto& enc = pub.encoder();
  auto product = ckks::MulPlain(ct, enc.Encode(model.weights, pub.default_scale(), ct.level()));
  // Summing before the rescale keeps rotation noise small against the
  // doubled scale.
  auto summed = ckks::Rescale(ckks::SumSlots(product, model.dimension(), pub));
  std::vector<double> bias = {model.bias};
  return ckks::AddPlain(summed, enc.Encode(bias, summed.scale, summed.level()));
}

}  // namespace hecredit::lr

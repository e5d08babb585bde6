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

#ifndef HECREDIT_LR_MODEL_H_
#define HECREDIT_LR_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hecredit/ckks/context.h"
#include "hecredit/ckks/evaluator.h"

namespace hecredit::lr {

// Trained logistic-regression model plus the normalization it expects. The
// weights apply to z-scored features: z_i = (x_i - mean_i) / std_i.
struct ModelBundle {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> feature_means;
  std::vector<double> feature_stds;
  std::string feature_schema_hash;

  std::size_t dimension() const { return weights.size(); }

  // Throws kSchema on inconsistent dimensions or non-positive stds.
  void Validate() const;

  std::string ToJson() const;
  static ModelBundle FromJson(const std::string& text);
  void Save(const std::string& path) const;
  static ModelBundle Load(const std::string& path);
};

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 200;
  int batch_size = 256;
  std::uint64_t seed = 1;
};

struct TrainResult {
  Eigen::VectorXd weights;
  double bias = 0.0;
  // Full-data average log-loss after each epoch.
  std::vector<double> epoch_losses;
};

// Mini-batch gradient descent from zero. X holds normalized rows. Throws
// kDegenerate when y has a single class.
TrainResult Train(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainConfig& cfg);

double Sigmoid(double t);
double LogLoss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w, double b);
// Gradient with respect to (w, b); the last entry is the bias component.
Eigen::VectorXd LogLossGradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                                double b);

std::vector<double> Normalize(std::span<const double> raw, const ModelBundle& model);
double LogitPlain(std::span<const double> raw, const ModelBundle& model);
double PredictPlain(std::span<const double> raw, const ModelBundle& model);
inline bool Decision(double probability) { return probability >= 0.5; }

// Encrypted logit in slot 0. The input holds normalized features in slots
// [0, d) and zeros elsewhere, at a level with one prime left to drop.
ckks::Ciphertext EvaluateEncrypted(const ckks::Ciphertext& ct, const ModelBundle& model,
                                   const ckks::PublicContext& pub);

}  // namespace hecredit::lr

#endif  // HECREDIT_LR_MODEL_H_

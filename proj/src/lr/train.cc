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
#include <numeric>

#include "hecredit/common/error.h"
#include "hecredit/lr/model.h"
#include "hecredit/ring/random.h"

namespace hecredit::lr {

namespace {

Eigen::VectorXd Probabilities(const Eigen::MatrixXd& x, const Eigen::VectorXd& w, double b) {
  Eigen::VectorXd t = (x * w).array() + b;
  return t.unaryExpr([](double v) { return Sigmoid(v); });
}

void CheckInputs(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw Error(ErrorCode::kShapeMismatch, "row count differs from label count");
  if (x.rows() == 0 || x.cols() == 0) throw Error(ErrorCode::kInvalidArgument, "empty training set");
  if (!x.allFinite()) throw Error(ErrorCode::kInvalidArgument, "non-finite feature value");
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] != 0.0 && y[i] != 1.0) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  }
}

}  // namespace

double LogLoss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w, double b) {
  Eigen::VectorXd t = (x * w).array() + b;
  // log(1 + e^t) - y t, computed without overflow.
  double total = 0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double v = t[i];
    const double softplus = v > 0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
    total += softplus - y[i] * v;
  }
  return total / static_cast<double>(t.size());
}

Eigen::VectorXd LogLossGradient(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                                double b) {
  Eigen::VectorXd r = Probabilities(x, w, b) - y;
  const double n = static_cast<double>(x.rows());
  Eigen::VectorXd g(w.size() + 1);
  g.head(w.size()) = x.transpose() * r / n;
  g[w.size()] = r.sum() / n;
  return g;
}

TrainResult Train(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0) || cfg.epochs < 1 || cfg.batch_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "learning_rate > 0, epochs >= 1 and batch_size >= 1 required");
  }
  CheckInputs(x, y);
  const double positives = y.sum();
  if (positives == 0 || positives == static_cast<double>(y.size())) {
    throw Error(ErrorCode::kDegenerate, "training labels contain a single class");
  }
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  TrainResult result;
  result.weights = Eigen::VectorXd::Zero(d);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto rng = ring::RandomSource::FromSeed(cfg.seed);
  const Eigen::Index batch = std::min<Eigen::Index>(cfg.batch_size, n);
  Eigen::MatrixXd xb(batch, d);
  Eigen::VectorXd yb(batch);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (batch < n) std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n; start += batch) {
      const Eigen::Index m = std::min(batch, n - start);
      for (Eigen::Index i = 0; i < m; ++i) {
        xb.row(i) = x.row(order[static_cast<std::size_t>(start + i)]);
        yb[i] = y[order[static_cast<std::size_t>(start + i)]];
      }
      auto g = LogLossGradient(xb.topRows(m), yb.head(m), result.weights, result.bias);
      result.weights -= cfg.learning_rate * g.head(d);
      result.bias -= cfg.learning_rate * g[d];
    }
    result.epoch_losses.push_back(LogLoss(x, y, result.weights, result.bias));
  }
  return result;
}

}  // namespace hecredit::lr

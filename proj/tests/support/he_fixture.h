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

#ifndef HECREDIT_TESTS_SUPPORT_HE_FIXTURE_H_
#define HECREDIT_TESTS_SUPPORT_HE_FIXTURE_H_

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hecredit/ckks/context.h"
#include "hecredit/ckks/evaluator.h"
#include "hecredit/ckks/serialize.h"
#include "hecredit/envelope/envelope.h"
#include "hecredit/lr/model.h"
#include "hecredit/ring/random.h"

namespace hecredit::testing {

// Random 26-feature model with nontrivial normalization.
inline lr::ModelBundle FixtureModel(std::uint64_t seed) {
  auto rng = ring::RandomSource::FromSeed(seed);
  std::uniform_real_distribution<double> w(-1.5, 1.5), mu(-5, 5), sd(0.5, 3);
  lr::ModelBundle m;
  for (int i = 0; i < 26; ++i) {
    m.weights.push_back(w(rng));
    m.feature_means.push_back(mu(rng));
    m.feature_stds.push_back(sd(rng));
  }
  m.bias = w(rng);
  m.feature_schema_hash = "fixture";
  return m;
}

// Client-side key material plus helpers to build requests and read results
// without going through the SDK.
class HeFixture {
 public:
  explicit HeFixture(std::uint64_t seed, ckks::SecurityParams params = ckks::SecurityParams::Standard())
      : rng_(ring::RandomSource::FromSeed(seed)) {
    priv_ = ckks::KeyGen(params, rng_);
    context_b64_ = envelope::Base64Encode(ckks::SerializePublic(pub()));
  }

  const ckks::PublicContext& pub() const { return *priv_->public_context(); }
  const ckks::PrivateContext& priv() const { return *priv_; }
  const std::string& context_b64() const { return context_b64_; }

  std::vector<double> Row(double range = 8.0) {
    std::uniform_real_distribution<double> u(-range, range);
    std::vector<double> x(26);
    for (auto& v : x) v = u(rng_);
    return x;
  }

  envelope::AssessmentRequest Request(const std::vector<double>& raw, const lr::ModelBundle& model,
                                      const std::string& sender, const std::string& correlation_id) {
    auto z = lr::Normalize(raw, model);
    auto ct = ckks::EncryptSymmetric(pub().encoder().Encode(z, pub().default_scale(), pub().top_level()), *priv_,
                                     rng_);
    envelope::AssessmentRequest r;
    r.sender_id = sender;
    r.correlation_id = correlation_id;
    r.reply_topic = envelope::ReplyTopicFor(sender);
    r.context_b64 = context_b64_;
    r.ciphertext_b64 = envelope::Base64Encode(ckks::SerializeCiphertext(ct, pub()));
    return r;
  }

  double DecryptLogit(const std::string& result_b64) {
    auto ct = ckks::DeserializeCiphertext(envelope::Base64Decode(result_b64), pub());
    ckks::DecryptOptions opt;
    opt.rng = &rng_;
    return pub().encoder().Decode(ckks::Decrypt(ct, *priv_, opt))[0];
  }

 private:
  ring::RandomSource rng_;
  std::shared_ptr<const ckks::PrivateContext> priv_;
  std::string context_b64_;
};

}  // namespace hecredit::testing

#endif  // HECREDIT_TESTS_SUPPORT_HE_FIXTURE_H_

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

#include "hecredit/cam/engine.h"

#include <chrono>
#include <optional>

#include "hecredit/ckks/serialize.h"

namespace hecredit::cam {

using envelope::CamReply;
using envelope::Status;

AssessmentEngine::AssessmentEngine(lr::ModelBundle model) : model_(std::move(model)) { model_.Validate(); }

EngineResult AssessmentEngine::Assess(const envelope::AssessmentRequest& request) const {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  auto fail = [&](int status, std::string detail) {
    EngineResult r;
    r.http_status = status;
    r.reply = CamReply{Status::kError, std::move(detail), std::nullopt, elapsed_ms()};
    return r;
  };

  Bytes ctx_bytes, ct_bytes;
  try {
    ctx_bytes = envelope::Base64Decode(request.context_b64, "context_b64");
    ct_bytes = envelope::Base64Decode(request.ciphertext_b64, "ciphertext_b64");
  } catch (const envelope::EnvelopeError& e) {
    return fail(400, std::string(envelope::FailureName(e.failure())));
  }

  std::shared_ptr<const ckks::PublicContext> pub;
  std::optional<ckks::Ciphertext> ct;
  try {
    pub = ckks::DeserializePublic(ctx_bytes);
    ct.emplace(ckks::DeserializeCiphertext(ct_bytes, *pub));
  } catch (const Error& e) {
    return fail(400, "bad_payload: " + std::string(e.what()));
  }
  if (model_.dimension() > pub->slot_count()) {
    return fail(400, "bad_payload: context has fewer slots than model features");
  }

  try {
    ckks::Ciphertext result = lr::EvaluateEncrypted(*ct, model_, *pub);
    std::string b64 = envelope::Base64Encode(ckks::SerializeCiphertext(result, *pub));
    EngineResult r;
    r.reply = CamReply{Status::kOk, std::nullopt, std::move(b64), 0.0};
    r.reply.t_server_ms = elapsed_ms();
    return r;
  } catch (const Error& e) {
    return fail(500, "evaluation_failed: " + std::string(ErrorCodeName(e.code())) + ": " + e.what());
  } catch (const std::exception& e) {
    return fail(500, "evaluation_failed: " + std::string(e.what()));
  }
}

}  // namespace hecredit::cam

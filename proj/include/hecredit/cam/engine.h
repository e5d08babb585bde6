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

#ifndef HECREDIT_CAM_ENGINE_H_
#define HECREDIT_CAM_ENGINE_H_

#include "hecredit/envelope/envelope.h"
#include "hecredit/lr/model.h"

namespace hecredit::cam {

struct EngineResult {
  envelope::CamReply reply;
  // 200 on success, 400 for undecodable input, 500 when evaluation fails.
  int http_status = 200;
};

// Evaluates the credit-assessment model on an encrypted request. Only the
// public context is ever deserialized here; there is no path to a secret key.
// Immutable after construction and safe to share across threads.
class AssessmentEngine {
 public:
  // Throws kSchema if the model is inconsistent.
  explicit AssessmentEngine(lr::ModelBundle model);

  // Never throws for bad input; failures come back as error replies whose
  // error_detail starts with a stable code such as "bad_base64".
  // reply.t_server_ms spans the whole call, decoding included.
  EngineResult Assess(const envelope::AssessmentRequest& request) const;

  const lr::ModelBundle& model() const { return model_; }

 private:
  lr::ModelBundle model_;
};

}  // namespace hecredit::cam

#endif  // HECREDIT_CAM_ENGINE_H_

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

#ifndef HECREDIT_CAM_HTTP_H_
#define HECREDIT_CAM_HTTP_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "hecredit/cam/engine.h"

namespace hecredit::cam {

struct CamConfig {
  std::string bind_address = "127.0.0.1";
  // 0 picks an ephemeral port; see CamServer::port().
  std::uint16_t port = 8080;
  std::size_t max_body_bytes = 256u << 20;
  // Parallel request handlers. 0 means one per hardware thread.
  unsigned workers = 0;
  // Adds POST /echo-size, which reports the received body length.
  bool enable_echo = false;
};

// HTTP front end for AssessmentEngine:
//   POST /assess   AssessmentRequest JSON -> CamReply JSON
//   GET  /healthz  "ok"
class CamServer {
 public:
  CamServer(CamConfig config, std::shared_ptr<const AssessmentEngine> engine);
  ~CamServer();
  CamServer(const CamServer&) = delete;
  CamServer& operator=(const CamServer&) = delete;

  // Binds and serves on a background thread. Throws Error(kUnavailable).
  void Start();
  void Stop();
  // Blocks until the server stops.
  void Wait();

  std::uint16_t port() const;
  // http://host:port of the bound listener.
  std::string url() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// POSTs body to an http:// URL with Content-Type application/json. Returns
// any HTTP status; transport failures throw Error(kUnavailable) or, when the
// peer stops answering, Error(kTimeout).
HttpResponse HttpPost(const std::string& url, std::string_view body,
                      std::chrono::seconds timeout = std::chrono::seconds(30));

HttpResponse HttpGet(const std::string& url, std::chrono::seconds timeout = std::chrono::seconds(30));

struct ParsedUrl {
  std::string host;
  std::uint16_t port = 80;
  std::string path = "/";
};
// Only the http scheme is accepted. Throws kInvalidArgument.
ParsedUrl ParseHttpUrl(std::string_view url);

}  // namespace hecredit::cam

#endif  // HECREDIT_CAM_HTTP_H_

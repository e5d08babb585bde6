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

#include "hecredit/cam/http.h"

#include <charconv>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "hecredit/common/error.h"
#include "hecredit/common/log.h"

namespace hecredit::cam {

namespace {

constexpr std::string_view kComponent = "cam";
constexpr const char* kJson = "application/json";

std::string ErrorBody(std::string_view detail) {
  return nlohmann::json{{"status", "error"}, {"error_detail", detail}, {"t_server_ms", 0.0}}.dump();
}

}  // namespace

struct CamServer::Impl {
  CamConfig config;
  std::shared_ptr<const AssessmentEngine> engine;
  httplib::Server server;
  std::thread thread;
  int bound_port = 0;
  std::mutex mu;
  bool running = false;

  void Routes() {
    server.Post("/assess", [this](const httplib::Request& req, httplib::Response& res) { Assess(req, res); });
    auto not_allowed = [](const httplib::Request&, httplib::Response& res) {
      res.status = 405;
      res.set_header("Allow", "POST");
      res.set_content(ErrorBody("method_not_allowed"), kJson);
    };
    server.Get("/assess", not_allowed);
    server.Put("/assess", not_allowed);
    server.Delete("/assess", not_allowed);
    server.Patch("/assess", not_allowed);
    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });
    if (config.enable_echo) {
      server.Post("/echo-size", [](const httplib::Request& req, httplib::Response& res) {
        res.set_content(nlohmann::json{{"bytes", req.body.size()}}.dump(), kJson);
      });
    }
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        res.set_content(ErrorBody(res.status == 413 ? "payload_too_large" : httplib::status_message(res.status)),
                        kJson);
      }
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string what = "unknown";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      res.status = 500;
      res.set_content(ErrorBody("internal_error: " + what), kJson);
    });
  }

  void Assess(const httplib::Request& req, httplib::Response& res) {
    EngineResult result;
    std::string correlation_id;
    try {
      auto body = std::span(reinterpret_cast<const std::uint8_t*>(req.body.data()), req.body.size());
      auto request = envelope::DecodeRequest(body, envelope::Hop::kCam);
      correlation_id = request.correlation_id;
      result = engine->Assess(request);
    } catch (const envelope::EnvelopeError& e) {
      result.http_status = 400;
      result.reply = envelope::CamReply{envelope::Status::kError,
                                        std::string(envelope::FailureName(e.failure())) + ": " + e.what(),
                                        std::nullopt, 0.0};
    }
    Bytes out = envelope::EncodeCamReply(result.reply);
    res.status = result.http_status;
    res.set_content(std::string(out.begin(), out.end()), kJson);
    log::Info(kComponent, "assess",
              {{"correlation_id", correlation_id},
               {"status", std::to_string(result.http_status)},
               {"t_server_ms", std::to_string(result.reply.t_server_ms)},
               {"request_bytes", std::to_string(req.body.size())}});
  }
};

CamServer::CamServer(CamConfig config, std::shared_ptr<const AssessmentEngine> engine)
    : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  impl_->engine = std::move(engine);
  if (!impl_->engine) throw Error(ErrorCode::kInvalidArgument, "CamServer needs an engine");
}

CamServer::~CamServer() { Stop(); }

void CamServer::Start() {
  Impl& s = *impl_;
  unsigned workers = s.config.workers ? s.config.workers : std::max(1u, std::thread::hardware_concurrency());
  s.server.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  s.server.set_payload_max_length(s.config.max_body_bytes);
  s.server.set_read_timeout(30);
  s.server.set_write_timeout(30);
  s.Routes();
  if (s.config.port == 0) {
    s.bound_port = s.server.bind_to_any_port(s.config.bind_address);
  } else if (s.server.bind_to_port(s.config.bind_address, s.config.port)) {
    s.bound_port = s.config.port;
  } else {
    s.bound_port = -1;
  }
  if (s.bound_port <= 0) {
    throw Error(ErrorCode::kUnavailable,
                "cam cannot listen on " + s.config.bind_address + ":" + std::to_string(s.config.port));
  }
  {
    std::lock_guard lock(s.mu);
    s.running = true;
  }
  s.thread = std::thread([&s] { s.server.listen_after_bind(); });
  s.server.wait_until_ready();
  log::Info(kComponent, "listening",
            {{"address", s.config.bind_address}, {"port", std::to_string(s.bound_port)},
             {"workers", std::to_string(workers)}});
}

void CamServer::Stop() {
  Impl& s = *impl_;
  {
    std::lock_guard lock(s.mu);
    if (!s.running) return;
    s.running = false;
  }
  s.server.stop();
  if (s.thread.joinable()) s.thread.join();
}

void CamServer::Wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::uint16_t CamServer::port() const { return static_cast<std::uint16_t>(impl_->bound_port); }

std::string CamServer::url() const {
  std::string host = impl_->config.bind_address == "0.0.0.0" ? "127.0.0.1" : impl_->config.bind_address;
  return "http://" + host + ":" + std::to_string(port());
}

ParsedUrl ParseHttpUrl(std::string_view url) {
  constexpr std::string_view kScheme = "http://";
  if (url.substr(0, kScheme.size()) != kScheme) {
    throw Error(ErrorCode::kInvalidArgument, "only http:// URLs are supported: " + std::string(url));
  }
  std::string_view rest = url.substr(kScheme.size());
  ParsedUrl out;
  auto slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (slash != std::string_view::npos) out.path = std::string(rest.substr(slash));
  auto colon = authority.rfind(':');
  if (colon != std::string_view::npos && authority.find(']') == std::string_view::npos) {
    std::string_view port_text = authority.substr(colon + 1);
    unsigned port = 0;
    auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port == 0 || port > 65535) {
      throw Error(ErrorCode::kInvalidArgument, "bad port in URL: " + std::string(url));
    }
    out.port = static_cast<std::uint16_t>(port);
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) throw Error(ErrorCode::kInvalidArgument, "missing host in URL: " + std::string(url));
  out.host = std::string(authority);
  return out;
}

namespace {

template <typename Call>
HttpResponse Request(std::string_view method, const std::string& url, std::chrono::seconds timeout, Call call) {
  ParsedUrl u = ParseHttpUrl(url);
  httplib::Client client(u.host, u.port);
  client.set_connection_timeout(timeout.count());
  client.set_read_timeout(timeout.count());
  client.set_write_timeout(timeout.count());
  httplib::Result res = call(client, u.path);
  if (!res) {
    auto err = res.error();
    std::string what = std::string(method) + " " + url + " failed: " + httplib::to_string(err);
    if (err == httplib::Error::Read || err == httplib::Error::Write) {
      throw Error(ErrorCode::kTimeout, what);
    }
    throw Error(ErrorCode::kUnavailable, what);
  }
  return {res->status, std::move(res->body)};
}

}  // namespace

HttpResponse HttpPost(const std::string& url, std::string_view body, std::chrono::seconds timeout) {
  return Request("POST", url, timeout, [&](httplib::Client& c, const std::string& path) {
    return c.Post(path, body.data(), body.size(), kJson);
  });
}

HttpResponse HttpGet(const std::string& url, std::chrono::seconds timeout) {
  return Request("GET", url, timeout, [](httplib::Client& c, const std::string& path) { return c.Get(path); });
}

}  // namespace hecredit::cam

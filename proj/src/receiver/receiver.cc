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

#include "hecredit/receiver/receiver.h"

#include <atomic>
#include <condition_variable>
#include <mutex>
#include <thread>

#include <boost/asio/post.hpp>
#include <boost/asio/thread_pool.hpp>

#include "hecredit/cam/http.h"
#include "hecredit/common/error.h"
#include "hecredit/common/log.h"
#include "hecredit/mqtt/client.h"

namespace hecredit::receiver {

using envelope::AssessmentResponse;
using envelope::CamReply;
using envelope::Status;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::string_view kComponent = "receiver";

double MsSince(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

CamReply ErrorReply(std::string detail) { return CamReply{Status::kError, std::move(detail), std::nullopt, 0.0}; }

std::string AssessUrl(const std::string& base) {
  constexpr std::string_view kPath = "/assess";
  if (base.size() >= kPath.size() && base.compare(base.size() - kPath.size(), kPath.size(), kPath) == 0) return base;
  return (!base.empty() && base.back() == '/') ? base + "assess" : base + std::string(kPath);
}

}  // namespace

std::string_view ModeName(Mode m) { return m == Mode::kLocalCam ? "local_cam" : "remote_cam"; }

std::optional<Outgoing> HandleRequest(std::span<const std::uint8_t> payload, const Evaluator& evaluate,
                                      Clock::time_point arrived) {
  AssessmentResponse resp;
  std::string topic;
  CamReply reply;
  try {
    auto req = envelope::DecodeRequest(payload, envelope::Hop::kBroker);
    resp.correlation_id = req.correlation_id;
    topic = req.reply_topic;
    reply = evaluate(req);
  } catch (const envelope::EnvelopeError& e) {
    auto route = envelope::PeekReplyRoute(payload);
    if (!route) return std::nullopt;
    resp.correlation_id = route->correlation_id;
    topic = route->reply_topic;
    reply = ErrorReply(std::string(envelope::FailureName(e.failure())));
  } catch (const std::exception& e) {
    reply = ErrorReply(std::string("internal_error: ") + e.what());
  }
  resp.status = reply.status;
  resp.error_detail = reply.error_detail;
  resp.result_b64 = std::move(reply.result_b64);
  resp.t_server_ms = reply.t_server_ms;
  // Everything but the final serialization and publish is inside t_receiver.
  resp.t_receiver_ms = std::max(MsSince(arrived), resp.t_server_ms);
  Outgoing out;
  out.topic = std::move(topic);
  out.payload = envelope::EncodeResponse(resp);
  out.response = std::move(resp);
  return out;
}

Evaluator LocalEvaluator(std::shared_ptr<const cam::AssessmentEngine> engine) {
  return [engine = std::move(engine)](const envelope::AssessmentRequest& req) { return engine->Assess(req).reply; };
}

Evaluator RemoteEvaluator(std::string cam_url, std::chrono::seconds timeout) {
  return [url = AssessUrl(cam_url), timeout](const envelope::AssessmentRequest& req) -> CamReply {
    Bytes body = envelope::EncodeRequest(req);
    cam::HttpResponse res;
    try {
      res = cam::HttpPost(url, std::string_view(reinterpret_cast<const char*>(body.data()), body.size()), timeout);
    } catch (const Error& e) {
      return ErrorReply(std::string(e.code() == ErrorCode::kTimeout ? "cam_timeout: " : "cam_unreachable: ") +
                        e.what());
    }
    CamReply reply;
    try {
      reply = envelope::DecodeCamReply(
          std::span(reinterpret_cast<const std::uint8_t*>(res.body.data()), res.body.size()));
    } catch (const envelope::EnvelopeError& e) {
      return ErrorReply("cam_bad_response: HTTP " + std::to_string(res.status) + ": " + e.what());
    }
    if (res.status != 200 && reply.status == Status::kOk) {
      return ErrorReply("cam_error: HTTP " + std::to_string(res.status));
    }
    return reply;
  };
}

struct Receiver::Impl {
  ReceiverConfig cfg;
  Evaluator evaluate;
  std::unique_ptr<boost::asio::thread_pool> pool;
  std::unique_ptr<mqtt::Client> client;
  std::atomic<bool> accepting{false};

  std::mutex mu;
  std::condition_variable cv;
  bool finished = false;
  bool started = false;

  std::atomic<std::uint64_t> received{0}, ok{0}, errors{0}, dropped{0};

  void OnMessage(const std::string& topic, Bytes payload) {
    const auto arrived = Clock::now();
    if (!accepting || topic != cfg.request_topic) return;
    ++received;
    boost::asio::post(*pool, [this, arrived, payload = std::move(payload)] { Process(payload, arrived); });
  }

  void Process(const Bytes& payload, Clock::time_point arrived) {
    auto out = HandleRequest(payload, evaluate, arrived);
    if (!out) {
      ++dropped;
      log::Warn(kComponent, "drop", {{"reason", "unparseable request without reply topic"},
                                     {"bytes", std::to_string(payload.size())}});
      return;
    }
    const auto& r = out->response;
    (r.status == Status::kOk ? ok : errors)++;
    try {
      client->Publish(out->topic, out->payload);
    } catch (const Error& e) {
      log::Warn(kComponent, "publish_failed", {{"correlation_id", r.correlation_id}, {"error", e.what()}});
      return;
    }
    log::Info(kComponent, "request",
              {{"correlation_id", r.correlation_id},
               {"mode", std::string(ModeName(cfg.mode))},
               {"status", r.status == Status::kOk ? "ok" : "error"},
               {"t_receiver_ms", std::to_string(r.t_receiver_ms)},
               {"t_server_ms", std::to_string(r.t_server_ms)},
               {"detail", r.error_detail.value_or("")}});
  }

  void Finish() {
    {
      std::lock_guard lock(mu);
      finished = true;
    }
    cv.notify_all();
  }
};

Receiver::Receiver(ReceiverConfig cfg, std::shared_ptr<const cam::AssessmentEngine> engine)
    : impl_(std::make_unique<Impl>()) {
  Impl& r = *impl_;
  r.cfg = std::move(cfg);
  if (r.cfg.mode == Mode::kRemoteCam) {
    if (r.cfg.cam_url.empty()) throw Error(ErrorCode::kInvalidArgument, "remote mode requires cam_url");
    cam::ParseHttpUrl(r.cfg.cam_url);
    r.evaluate = RemoteEvaluator(r.cfg.cam_url, r.cfg.cam_timeout);
  } else {
    if (!engine) {
      if (r.cfg.model_path.empty()) throw Error(ErrorCode::kInvalidArgument, "local mode requires a model path");
      engine = std::make_shared<cam::AssessmentEngine>(lr::ModelBundle::Load(r.cfg.model_path));
    }
    r.evaluate = LocalEvaluator(std::move(engine));
  }
}

Receiver::~Receiver() { Stop(); }

void Receiver::Start() {
  Impl& r = *impl_;
  unsigned workers = r.cfg.workers ? r.cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  r.pool = std::make_unique<boost::asio::thread_pool>(workers);
  mqtt::ClientOptions opts;
  opts.host = r.cfg.broker_host;
  opts.port = r.cfg.broker_port;
  opts.client_id = r.cfg.client_id;
  r.accepting = true;
  r.client = mqtt::Client::Connect(
      opts, [&r](const std::string& topic, Bytes payload) { r.OnMessage(topic, std::move(payload)); },
      [&r](const std::string& reason) {
        log::Warn(kComponent, "broker_lost", {{"reason", reason}});
        r.Finish();
      });
  r.client->Subscribe({r.cfg.request_topic});
  {
    std::lock_guard lock(r.mu);
    r.started = true;
  }
  log::Info(kComponent, "ready",
            {{"topic", r.cfg.request_topic},
             {"mode", std::string(ModeName(r.cfg.mode))},
             {"workers", std::to_string(workers)},
             {"cam_url", r.cfg.cam_url}});
}

void Receiver::Stop() {
  Impl& r = *impl_;
  {
    std::lock_guard lock(r.mu);
    if (!r.started) return;
    r.started = false;
  }
  r.accepting = false;
  r.pool->join();
  r.client->Disconnect();
  r.Finish();
}

void Receiver::Wait() {
  std::unique_lock lock(impl_->mu);
  impl_->cv.wait(lock, [&] { return impl_->finished; });
}

ReceiverStats Receiver::stats() const {
  return {impl_->received.load(), impl_->ok.load(), impl_->errors.load(), impl_->dropped.load()};
}

}  // namespace hecredit::receiver

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

#include "hecredit/broker/broker.h"

#include <sys/socket.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <list>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <thread>
#include <unordered_map>

#include <boost/asio.hpp>

#include "hecredit/common/error.h"
#include "hecredit/common/log.h"
#include "hecredit/mqtt/codec.h"

namespace hecredit::broker {

namespace asio = boost::asio;
using asio::ip::tcp;
using Clock = std::chrono::steady_clock;
using Frame = std::shared_ptr<const Bytes>;

namespace {

constexpr std::string_view kComponent = "broker";

struct Session {
  explicit Session(tcp::socket s) : socket(std::move(s)) {}

  tcp::socket socket;
  std::string client_id;
  std::string peer;
  std::uint16_t keepalive_s = 0;
  std::atomic<Clock::rep> last_activity{Clock::now().time_since_epoch().count()};
  std::atomic<bool> connected{false};

  std::mutex mu;
  std::condition_variable cv;
  std::deque<Frame> outbound;
  std::size_t queued_bytes = 0;
  bool closing = false;
  std::string close_reason;

  std::set<std::string> topics;  // guarded by the broker's table lock

  std::thread reader;
  std::thread writer;
  std::atomic<bool> reader_done{false};
  std::atomic<bool> writer_done{false};

  void Touch() { last_activity = Clock::now().time_since_epoch().count(); }

  // Returns true for the call that actually initiated the close.
  bool Close(std::string reason) {
    {
      std::lock_guard lock(mu);
      if (closing) return false;
      closing = true;
      close_reason = std::move(reason);
      outbound.clear();
      queued_bytes = 0;
    }
    cv.notify_all();
    // shutdown() unblocks the reader without racing on the socket object.
    boost::system::error_code ec;
    socket.shutdown(tcp::socket::shutdown_both, ec);
    return true;
  }

  // False when the frame would overflow the buffer or the session is closing.
  bool Enqueue(const Frame& frame, std::size_t limit) {
    {
      std::lock_guard lock(mu);
      if (closing) return false;
      if (queued_bytes + frame->size() > limit) return false;
      queued_bytes += frame->size();
      outbound.push_back(frame);
    }
    cv.notify_one();
    return true;
  }
};

using SessionPtr = std::shared_ptr<Session>;

}  // namespace

struct Broker::Impl {
  BrokerConfig config;
  asio::io_context io;
  tcp::acceptor acceptor{io};
  std::uint16_t bound_port = 0;

  std::thread accept_thread;
  std::thread watchdog_thread;
  std::atomic<bool> stopping{false};
  std::mutex stop_mu;
  std::condition_variable stop_cv;
  bool started = false;
  bool stopped = false;

  mutable std::shared_mutex table_mu;
  std::map<std::string, std::set<SessionPtr>, std::less<>> subscriptions;
  std::unordered_map<std::string, SessionPtr> live;  // by client_id

  mutable std::mutex sessions_mu;
  std::list<SessionPtr> sessions;

  std::mutex observer_mu;
  PublishObserver observer;

  std::atomic<std::uint64_t> n_connections{0}, n_publishes{0}, n_deliveries{0}, n_dropped{0}, n_protocol_errors{0};
  std::atomic<std::uint64_t> anon_counter{0};

  void AcceptLoop() {
    for (;;) {
      boost::system::error_code ec;
      tcp::socket socket(io);
      acceptor.accept(socket, ec);
      if (stopping) break;
      if (ec) {
        log::Warn(kComponent, "accept_error", {{"error", ec.message()}});
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
        continue;
      }
      socket.set_option(tcp::no_delay(true), ec);
      auto session = std::make_shared<Session>(std::move(socket));
      auto remote = session->socket.remote_endpoint(ec);
      session->peer = ec ? "?" : remote.address().to_string() + ":" + std::to_string(remote.port());
      ++n_connections;
      {
        std::lock_guard lock(sessions_mu);
        sessions.push_back(session);
      }
      session->reader = std::thread([this, session] { ReadLoop(session); });
      session->writer = std::thread([this, session] { WriteLoop(session); });
    }
  }

  void WriteLoop(const SessionPtr& s) {
    for (;;) {
      Frame frame;
      {
        std::unique_lock lock(s->mu);
        s->cv.wait(lock, [&] { return s->closing || !s->outbound.empty(); });
        if (s->closing) break;
        frame = std::move(s->outbound.front());
        s->outbound.pop_front();
      }
      boost::system::error_code ec;
      asio::write(s->socket, asio::buffer(*frame), ec);
      {
        std::lock_guard lock(s->mu);
        s->queued_bytes -= std::min(s->queued_bytes, frame->size());
      }
      if (ec) {
        s->Close("write error: " + ec.message());
        break;
      }
    }
    s->writer_done = true;
  }

  bool Send(const SessionPtr& s, const mqtt::Packet& p) {
    return s->Enqueue(std::make_shared<const Bytes>(mqtt::Encode(p)), config.session_buffer_bytes);
  }

  void ReadLoop(const SessionPtr& s) {
    mqtt::StreamDecoder decoder(config.max_packet);
    std::vector<std::uint8_t> chunk(1 << 16);
    std::string reason = "eof";
    try {
      bool done = false;
      while (!done) {
        boost::system::error_code ec;
        std::size_t n = s->socket.read_some(asio::buffer(chunk), ec);
        if (ec) {
          if (ec != asio::error::eof) reason = ec.message();
          break;
        }
        s->Touch();
        decoder.Feed({chunk.data(), n});
        for (;;) {
          auto r = decoder.Next();
          if (std::holds_alternative<mqtt::NeedMoreBytes>(r)) break;
          if (auto* e = std::get_if<mqtt::ProtocolError>(&r)) {
            ++n_protocol_errors;
            reason = "protocol error: " + e->reason;
            done = true;
            break;
          }
          if (!Handle(s, std::get<mqtt::Decoded>(r).packet, reason)) {
            done = true;
            break;
          }
        }
      }
    } catch (const std::exception& e) {
      // Crash isolation: anything unexpected ends only this session.
      reason = std::string("internal error: ") + e.what();
    }
    Cleanup(s, reason);
    s->reader_done = true;
  }

  // Returns false when the session should end.
  bool Handle(const SessionPtr& s, mqtt::Packet& packet, std::string& reason) {
    if (!s->connected) {
      auto* c = std::get_if<mqtt::Connect>(&packet);
      if (c == nullptr) {
        ++n_protocol_errors;
        reason = "first packet was " + std::string(mqtt::PacketName(packet));
        return false;
      }
      return HandleConnect(s, *c, reason);
    }
    return std::visit(
        [&](auto& p) -> bool {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, mqtt::Publish>) {
            HandlePublish(s, p);
            return true;
          } else if constexpr (std::is_same_v<T, mqtt::Subscribe>) {
            HandleSubscribe(s, p);
            return true;
          } else if constexpr (std::is_same_v<T, mqtt::PingReq>) {
            Send(s, mqtt::PingResp{});
            return true;
          } else if constexpr (std::is_same_v<T, mqtt::Disconnect>) {
            reason = "disconnect";
            return false;
          } else {
            ++n_protocol_errors;
            reason = "unexpected " + std::string(mqtt::PacketName(packet));
            return false;
          }
        },
        packet);
  }

  bool HandleConnect(const SessionPtr& s, const mqtt::Connect& c, std::string& reason) {
    if (c.client_id.empty() && !c.clean_session) {
      Send(s, mqtt::ConnAck{false, 0x02});
      reason = "empty client id without clean session";
      return false;
    }
    s->client_id = c.client_id.empty() ? "anon-" + std::to_string(++anon_counter) : c.client_id;
    s->keepalive_s = c.keepalive_s;
    SessionPtr kicked;
    {
      std::unique_lock lock(table_mu);
      auto [it, inserted] = live.try_emplace(s->client_id, s);
      if (!inserted) {
        kicked = it->second;
        it->second = s;
      }
    }
    if (kicked) {
      log::Info(kComponent, "takeover", {{"client_id", s->client_id}, {"peer", s->peer}});
      kicked->Close("taken over by new connection");
    }
    s->connected = true;
    Send(s, mqtt::ConnAck{false, 0});
    log::Info(kComponent, "connect",
              {{"client_id", s->client_id}, {"peer", s->peer}, {"keepalive_s", std::to_string(c.keepalive_s)}});
    return true;
  }

  void HandleSubscribe(const SessionPtr& s, const mqtt::Subscribe& sub) {
    mqtt::SubAck ack{sub.packet_id, {}};
    {
      std::unique_lock lock(table_mu);
      for (const auto& filter : sub.topic_filters) {
        // Only exact topics are routed; wildcard filters are refused.
        if (mqtt::HasWildcard(filter) || !mqtt::IsValidTopicName(filter)) {
          ack.granted.push_back(mqtt::kSubAckFailure);
          continue;
        }
        subscriptions[filter].insert(s);
        s->topics.insert(filter);
        ack.granted.push_back(0);
      }
    }
    Send(s, ack);
    for (std::size_t i = 0; i < sub.topic_filters.size(); ++i) {
      log::Info(kComponent, "subscribe",
                {{"client_id", s->client_id},
                 {"topic", sub.topic_filters[i]},
                 {"granted", ack.granted[i] == 0 ? "yes" : "no"}});
    }
  }

  void HandlePublish(const SessionPtr& s, const mqtt::Publish& p) {
    ++n_publishes;
    {
      std::lock_guard lock(observer_mu);
      if (observer) observer(s->client_id, p.topic, p.payload);
    }
    std::size_t count = RouteFrame(p.topic, p.payload);
    log::Debug(kComponent, "publish",
               {{"client_id", s->client_id},
                {"topic", p.topic},
                {"bytes", std::to_string(p.payload.size())},
                {"deliveries", std::to_string(count)}});
  }

  std::size_t RouteFrame(std::string_view topic, std::span<const std::uint8_t> payload) {
    std::vector<SessionPtr> targets;
    {
      std::shared_lock lock(table_mu);
      auto it = subscriptions.find(topic);
      if (it == subscriptions.end()) return 0;
      targets.assign(it->second.begin(), it->second.end());
    }
    auto frame = std::make_shared<const Bytes>(mqtt::EncodePublish(topic, payload));
    std::size_t delivered = 0;
    for (const auto& t : targets) {
      if (t->Enqueue(frame, config.session_buffer_bytes)) {
        ++delivered;
        continue;
      }
      if (t->Close("outbound buffer full")) {
        ++n_dropped;
        log::Warn(kComponent, "drop", {{"client_id", t->client_id}, {"reason", "outbound buffer full"}});
      }
    }
    n_deliveries += delivered;
    return delivered;
  }

  void Cleanup(const SessionPtr& s, const std::string& reason) {
    s->Close(reason);
    {
      std::unique_lock lock(table_mu);
      for (const auto& topic : s->topics) {
        auto it = subscriptions.find(topic);
        if (it == subscriptions.end()) continue;
        it->second.erase(s);
        if (it->second.empty()) subscriptions.erase(it);
      }
      s->topics.clear();
      if (s->connected) {
        auto it = live.find(s->client_id);
        if (it != live.end() && it->second == s) live.erase(it);
      }
    }
    std::string why;
    {
      std::lock_guard lock(s->mu);
      why = s->close_reason;
    }
    if (s->connected) {
      log::Info(kComponent, "disconnect", {{"client_id", s->client_id}, {"peer", s->peer}, {"reason", why}});
    } else {
      log::Debug(kComponent, "reject", {{"peer", s->peer}, {"reason", why}});
    }
  }

  // Enforces keepalive and joins finished session threads.
  void WatchdogLoop() {
    std::unique_lock lock(stop_mu);
    while (!stop_cv.wait_for(lock, std::chrono::milliseconds(100), [&] { return stopping.load(); })) {
      lock.unlock();
      auto now = Clock::now();
      std::vector<SessionPtr> finished;
      {
        std::lock_guard slock(sessions_mu);
        for (auto it = sessions.begin(); it != sessions.end();) {
          const SessionPtr& s = *it;
          if (s->reader_done && s->writer_done) {
            finished.push_back(s);
            it = sessions.erase(it);
            continue;
          }
          if (s->connected && s->keepalive_s > 0) {
            auto idle = now - Clock::time_point(Clock::duration(s->last_activity.load()));
            if (idle > std::chrono::milliseconds(s->keepalive_s * 1500)) {
              if (s->Close("keepalive timeout")) {
                log::Info(kComponent, "keepalive_timeout", {{"client_id", s->client_id}});
              }
            }
          }
          ++it;
        }
      }
      for (auto& s : finished) {
        s->reader.join();
        s->writer.join();
      }
      lock.lock();
    }
  }
};

Broker::Broker(BrokerConfig config) : impl_(std::make_unique<Impl>()) { impl_->config = std::move(config); }

Broker::~Broker() { Stop(); }

void Broker::Start() {
  Impl& b = *impl_;
  if (b.started) throw Error(ErrorCode::kInvalidArgument, "broker already started");
  try {
    tcp::endpoint ep(asio::ip::make_address(b.config.bind_address), b.config.port);
    b.acceptor.open(ep.protocol());
    b.acceptor.set_option(tcp::acceptor::reuse_address(true));
    b.acceptor.bind(ep);
    b.acceptor.listen(asio::socket_base::max_listen_connections);
    b.bound_port = b.acceptor.local_endpoint().port();
  } catch (const boost::system::system_error& e) {
    throw Error(ErrorCode::kUnavailable, "broker cannot listen on " + b.config.bind_address + ":" +
                                             std::to_string(b.config.port) + ": " + e.what());
  }
  b.started = true;
  b.accept_thread = std::thread([&b] { b.AcceptLoop(); });
  b.watchdog_thread = std::thread([&b] { b.WatchdogLoop(); });
  log::Info(kComponent, "listening", {{"address", b.config.bind_address}, {"port", std::to_string(b.bound_port)}});
}

void Broker::Stop() {
  Impl& b = *impl_;
  {
    std::lock_guard lock(b.stop_mu);
    if (!b.started || b.stopped) return;
    b.stopped = true;
    b.stopping = true;
  }
  b.stop_cv.notify_all();
  // Wakes the blocking accept() on Linux.
  ::shutdown(b.acceptor.native_handle(), SHUT_RDWR);
  b.accept_thread.join();
  b.watchdog_thread.join();
  boost::system::error_code ec;
  b.acceptor.close(ec);
  std::list<SessionPtr> all;
  {
    std::lock_guard lock(b.sessions_mu);
    all.swap(b.sessions);
  }
  for (auto& s : all) s->Close("broker shutdown");
  for (auto& s : all) {
    s->reader.join();
    s->writer.join();
  }
  log::Info(kComponent, "stopped");
}

void Broker::Wait() {
  Impl& b = *impl_;
  std::unique_lock lock(b.stop_mu);
  b.stop_cv.wait(lock, [&] { return b.stopping.load(); });
}

std::uint16_t Broker::port() const { return impl_->bound_port; }

void Broker::SetObserver(PublishObserver observer) {
  std::lock_guard lock(impl_->observer_mu);
  impl_->observer = std::move(observer);
}

std::size_t Broker::Route(std::string_view topic, std::span<const std::uint8_t> payload) {
  return impl_->RouteFrame(topic, payload);
}

BrokerStats Broker::stats() const {
  const Impl& b = *impl_;
  return {b.n_connections.load(), b.n_publishes.load(), b.n_deliveries.load(), b.n_dropped.load(),
          b.n_protocol_errors.load()};
}

std::size_t Broker::session_count() const {
  std::shared_lock lock(impl_->table_mu);
  return impl_->live.size();
}

std::size_t Broker::subscriber_count(std::string_view topic) const {
  std::shared_lock lock(impl_->table_mu);
  auto it = impl_->subscriptions.find(topic);
  return it == impl_->subscriptions.end() ? 0 : it->second.size();
}

}  // namespace hecredit::broker

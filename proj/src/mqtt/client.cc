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

#include "hecredit/mqtt/client.h"

#include <atomic>
#include <charconv>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <thread>

#include <boost/asio.hpp>

#include "hecredit/common/error.h"
#include "hecredit/common/log.h"
#include "hecredit/mqtt/codec.h"

namespace hecredit::mqtt {

namespace asio = boost::asio;
using asio::ip::tcp;

struct Client::Impl {
  ClientOptions options;
  MessageHandler on_message;
  CloseHandler on_close;

  asio::io_context io;
  tcp::socket socket{io};
  std::mutex write_mu;

  std::mutex mu;
  std::condition_variable cv;
  std::optional<ConnAck> connack;
  std::optional<SubAck> suback;
  std::uint16_t next_packet_id = 1;
  bool closed = false;
  std::string close_reason;

  std::atomic<bool> stopping{false};
  std::thread reader;
  std::thread pinger;

  void Write(std::span<const std::uint8_t> frame) {
    std::lock_guard lock(write_mu);
    boost::system::error_code ec;
    asio::write(socket, asio::buffer(frame.data(), frame.size()), ec);
    if (ec) throw Error(ErrorCode::kUnavailable, "mqtt write failed: " + ec.message());
  }

  void MarkClosed(const std::string& reason) {
    bool first = false;
    {
      std::lock_guard lock(mu);
      if (!closed) {
        closed = true;
        close_reason = reason;
        first = true;
      }
    }
    cv.notify_all();
    if (first) {
      boost::system::error_code ec;
      socket.shutdown(tcp::socket::shutdown_both, ec);
      if (on_close && !stopping.load()) on_close(reason);
    }
  }

  void ReadLoop() {
    StreamDecoder decoder(options.max_packet);
    std::vector<std::uint8_t> chunk(1 << 16);
    std::string reason = "closed";
    for (;;) {
      boost::system::error_code ec;
      std::size_t n = socket.read_some(asio::buffer(chunk), ec);
      if (ec) {
        reason = ec == asio::error::eof ? "eof" : ec.message();
        break;
      }
      decoder.Feed({chunk.data(), n});
      bool fatal = false;
      for (;;) {
        auto r = decoder.Next();
        if (std::holds_alternative<NeedMoreBytes>(r)) break;
        if (auto* e = std::get_if<ProtocolError>(&r)) {
          reason = "protocol error: " + e->reason;
          fatal = true;
          break;
        }
        Packet& p = std::get<Decoded>(r).packet;
        if (auto* pub = std::get_if<mqtt::Publish>(&p)) {
          if (on_message) {
            try {
              on_message(pub->topic, std::move(pub->payload));
            } catch (const std::exception& ex) {
              log::Warn("mqtt_client", "handler_error", {{"client_id", options.client_id}, {"error", ex.what()}});
            }
          }
        } else if (auto* ack = std::get_if<ConnAck>(&p)) {
          std::lock_guard lock(mu);
          connack = *ack;
          cv.notify_all();
        } else if (auto* sack = std::get_if<SubAck>(&p)) {
          std::lock_guard lock(mu);
          suback = *sack;
          cv.notify_all();
        } else if (std::holds_alternative<PingResp>(p)) {
          // Traffic alone keeps the session alive.
        } else {
          reason = std::string("unexpected ") + std::string(PacketName(p));
          fatal = true;
          break;
        }
      }
      if (fatal) break;
    }
    MarkClosed(reason);
  }

  void PingLoop() {
    auto period = std::chrono::milliseconds(options.keepalive_s * 1000 / 2);
    Bytes ping = Encode(PingReq{});
    std::unique_lock lock(mu);
    while (!closed) {
      if (cv.wait_for(lock, period, [&] { return closed; })) break;
      lock.unlock();
      try {
        Write(ping);
      } catch (const Error&) {
        lock.lock();
        break;
      }
      lock.lock();
    }
  }
};

Client::Client(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

Client::~Client() {
  Disconnect();
}

std::unique_ptr<Client> Client::Connect(const ClientOptions& options, MessageHandler on_message,
                                        CloseHandler on_close) {
  auto impl = std::make_unique<Impl>();
  impl->options = options;
  impl->on_message = std::move(on_message);
  impl->on_close = std::move(on_close);
  try {
    tcp::resolver resolver(impl->io);
    auto endpoints = resolver.resolve(options.host, std::to_string(options.port));
    asio::connect(impl->socket, endpoints);
    impl->socket.set_option(tcp::no_delay(true));
  } catch (const boost::system::system_error& e) {
    throw Error(ErrorCode::kUnavailable,
                "cannot connect to broker " + options.host + ":" + std::to_string(options.port) + ": " + e.what());
  }
  std::unique_ptr<Client> client(new Client(std::move(impl)));
  Impl& s = *client->impl_;
  s.reader = std::thread([&s] { s.ReadLoop(); });
  s.Write(Encode(mqtt::Connect{options.client_id, options.keepalive_s, true}));
  {
    std::unique_lock lock(s.mu);
    if (!s.cv.wait_for(lock, options.connect_timeout, [&] { return s.connack.has_value() || s.closed; })) {
      lock.unlock();
      client->Disconnect();
      throw Error(ErrorCode::kTimeout, "no CONNACK from broker");
    }
    if (!s.connack) {
      std::string reason = s.close_reason;
      lock.unlock();
      client->Disconnect();
      throw Error(ErrorCode::kUnavailable, "broker closed connection during CONNECT: " + reason);
    }
    if (s.connack->return_code != 0) {
      int rc = s.connack->return_code;
      lock.unlock();
      client->Disconnect();
      throw Error(ErrorCode::kUnavailable, "broker refused connection, return code " + std::to_string(rc));
    }
  }
  if (options.keepalive_s > 0) s.pinger = std::thread([&s] { s.PingLoop(); });
  return client;
}

void Client::Subscribe(const std::vector<std::string>& topics, std::chrono::milliseconds timeout) {
  Impl& s = *impl_;
  std::uint16_t id;
  {
    std::lock_guard lock(s.mu);
    if (s.closed) throw Error(ErrorCode::kUnavailable, "client closed: " + s.close_reason);
    id = s.next_packet_id++;
    if (s.next_packet_id == 0) s.next_packet_id = 1;
    s.suback.reset();
  }
  s.Write(Encode(mqtt::Subscribe{id, topics}));
  std::unique_lock lock(s.mu);
  if (!s.cv.wait_for(lock, timeout, [&] { return (s.suback && s.suback->packet_id == id) || s.closed; })) {
    throw Error(ErrorCode::kTimeout, "no SUBACK from broker");
  }
  if (!s.suback || s.suback->packet_id != id) {
    throw Error(ErrorCode::kUnavailable, "client closed: " + s.close_reason);
  }
  for (auto code : s.suback->granted) {
    if (code == kSubAckFailure) throw Error(ErrorCode::kProtocol, "broker refused subscription");
  }
}

std::size_t Client::Publish(std::string_view topic, std::span<const std::uint8_t> payload) {
  if (!connected()) throw Error(ErrorCode::kUnavailable, "client closed: " + impl_->close_reason);
  Bytes frame = EncodePublish(topic, payload);
  impl_->Write(frame);
  return frame.size();
}

void Client::Disconnect() {
  Impl& s = *impl_;
  if (s.stopping.exchange(true)) {
    return;
  }
  if (connected()) {
    try {
      s.Write(Encode(mqtt::Disconnect{}));
    } catch (const Error&) {
    }
  }
  s.MarkClosed("disconnect");
  if (s.reader.joinable()) s.reader.join();
  if (s.pinger.joinable()) s.pinger.join();
  boost::system::error_code ec;
  s.socket.close(ec);
}

bool Client::connected() const {
  std::lock_guard lock(impl_->mu);
  return !impl_->closed;
}

const std::string& Client::client_id() const { return impl_->options.client_id; }

std::pair<std::string, std::uint16_t> ParseHostPort(std::string_view address, std::uint16_t default_port) {
  std::string host = "127.0.0.1";
  std::string_view port_text;
  if (address.empty()) return {host, default_port};
  if (address.front() == '[') {
    auto close = address.find(']');
    if (close == std::string_view::npos) throw Error(ErrorCode::kInvalidArgument, "bad address: " + std::string(address));
    host = std::string(address.substr(1, close - 1));
    if (close + 1 < address.size()) {
      if (address[close + 1] != ':') throw Error(ErrorCode::kInvalidArgument, "bad address: " + std::string(address));
      port_text = address.substr(close + 2);
    }
  } else if (auto colon = address.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) host = std::string(address.substr(0, colon));
    port_text = address.substr(colon + 1);
  } else if (address.find_first_not_of("0123456789") == std::string_view::npos) {
    port_text = address;
  } else {
    host = std::string(address);
  }
  if (port_text.empty()) return {host, default_port};
  unsigned port = 0;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "bad port in address: " + std::string(address));
  }
  return {host, static_cast<std::uint16_t>(port)};
}

}  // namespace hecredit::mqtt

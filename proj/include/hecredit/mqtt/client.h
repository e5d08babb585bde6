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

#ifndef HECREDIT_MQTT_CLIENT_H_
#define HECREDIT_MQTT_CLIENT_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hecredit/common/byte_io.h"

namespace hecredit::mqtt {

struct ClientOptions {
  std::string host = "127.0.0.1";
  std::uint16_t port = 1883;
  std::string client_id;
  std::uint16_t keepalive_s = 60;
  std::chrono::milliseconds connect_timeout{10000};
  std::uint32_t max_packet = 512u << 20;
};

// Blocking QoS 0 client. Incoming PUBLISH packets are handed to the message
// handler on the client's reader thread, so handlers should be quick or hand
// work off. Publish may be called from any thread.
class Client {
 public:
  using MessageHandler = std::function<void(const std::string& topic, Bytes payload)>;
  using CloseHandler = std::function<void(const std::string& reason)>;

  // Connects and waits for CONNACK. Throws Error(kUnavailable) when the
  // broker cannot be reached or refuses, kTimeout when it does not answer.
  static std::unique_ptr<Client> Connect(const ClientOptions& options, MessageHandler on_message,
                                         CloseHandler on_close = {});

  ~Client();
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;

  // Waits for SUBACK. Throws kProtocol if any filter is refused.
  void Subscribe(const std::vector<std::string>& topics,
                 std::chrono::milliseconds timeout = std::chrono::seconds(10));
  // Returns the size of the PUBLISH frame written.
  std::size_t Publish(std::string_view topic, std::span<const std::uint8_t> payload);
  // Sends DISCONNECT and closes. Idempotent.
  void Disconnect();

  bool connected() const;
  const std::string& client_id() const;

 private:
  struct Impl;
  explicit Client(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

// Splits "host:port" (or "port", or "[v6]:port"). Throws kInvalidArgument.
std::pair<std::string, std::uint16_t> ParseHostPort(std::string_view address, std::uint16_t default_port);

}  // namespace hecredit::mqtt

#endif  // HECREDIT_MQTT_CLIENT_H_

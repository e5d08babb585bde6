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

#ifndef HECREDIT_BROKER_BROKER_H_
#define HECREDIT_BROKER_BROKER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace hecredit::broker {

struct BrokerConfig {
  std::string bind_address = "127.0.0.1";
  // 0 picks an ephemeral port; see Broker::port().
  std::uint16_t port = 1883;
  std::uint32_t max_packet = 512u << 20;
  // Outbound bytes a session may have queued before it is dropped.
  std::size_t session_buffer_bytes = 64u << 20;
};

struct BrokerStats {
  std::uint64_t connections = 0;
  std::uint64_t publishes_in = 0;
  std::uint64_t deliveries = 0;
  std::uint64_t dropped_sessions = 0;
  std::uint64_t protocol_errors = 0;
};

// Sees every inbound PUBLISH exactly as the broker does. Used by tests to
// check what an honest-but-curious broker learns.
using PublishObserver =
    std::function<void(std::string_view client_id, std::string_view topic, std::span<const std::uint8_t> payload)>;

// QoS 0 MQTT broker with exact-match topic routing and fan-out to every
// subscriber. One reader and one writer thread per connection.
class Broker {
 public:
  explicit Broker(BrokerConfig config);
  ~Broker();
  Broker(const Broker&) = delete;
  Broker& operator=(const Broker&) = delete;

  // Binds and starts accepting. Throws Error(kUnavailable) if the address
  // cannot be bound.
  void Start();
  // Closes the listener and every session, then joins all threads.
  void Stop();
  // Blocks until Stop is called from another thread.
  void Wait();

  std::uint16_t port() const;
  void SetObserver(PublishObserver observer);

  // Queues the payload for every session subscribed to exactly `topic` and
  // returns how many sessions it was queued for.
  std::size_t Route(std::string_view topic, std::span<const std::uint8_t> payload);

  BrokerStats stats() const;
  std::size_t session_count() const;
  std::size_t subscriber_count(std::string_view topic) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hecredit::broker

#endif  // HECREDIT_BROKER_BROKER_H_

// Copyright 2026 The evfleet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "evfleet/ingest/codec.hpp"
#include "evfleet/ingest/topic.hpp"

namespace evfleet::ingest {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 asks the OS for an ephemeral port when listening

  std::string str() const { return host + ":" + std::to_string(port); }
  bool operator==(const Endpoint&) const = default;
};

/// "host:port" or ":port". Throws Error(UsageError) when malformed.
Endpoint parse_endpoint(std::string_view text);

struct BrokerOptions {
  /// Bytes queued for one subscriber before publishers wait for it.
  std::size_t max_queue_bytes = 8u << 20;
  /// How long a publisher waits on a full subscriber queue before the
  /// message is dropped for that subscriber (QoS 0).
  std::chrono::milliseconds full_queue_wait{5000};
};

struct BrokerStats {
  std::uint64_t connections = 0;
  std::uint64_t protocol_errors = 0;
  std::uint64_t published = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
};

/// Pub/sub broker over TCP. Each connection gets a reader thread and a
/// writer thread; the routing table sits behind a shared mutex, so a
/// subscription is in effect for every publish routed after its SubAck.
class Broker {
 public:
  explicit Broker(BrokerOptions options = {});
  ~Broker();
  Broker(const Broker&) = delete;
  Broker& operator=(const Broker&) = delete;

  /// Binds and starts accepting. Throws Error(ConnectionError) if the
  /// endpoint cannot be bound.
  void start(const Endpoint& listen);
  /// Closes every connection and joins all threads. Idempotent.
  void stop();

  /// The bound endpoint (with the actual port).
  Endpoint endpoint() const;
  bool running() const noexcept { return running_; }
  BrokerStats stats() const;
  std::size_t session_count() const;

 private:
  struct Session;
  void accept_loop();
  void read_loop(const std::shared_ptr<Session>& s);
  void write_loop(const std::shared_ptr<Session>& s);
  void route(const Publish& p, const std::shared_ptr<std::vector<std::uint8_t>>& bytes);
  bool enqueue(Session& s, std::shared_ptr<std::vector<std::uint8_t>> bytes, bool wait);
  void close_session(Session& s);
  void reap(bool all);

  BrokerOptions options_;
  Endpoint bound_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;

  mutable std::shared_mutex routes_mu_;
  std::vector<std::shared_ptr<Session>> sessions_;  // routable (connected) sessions
  mutable std::mutex owned_mu_;
  std::vector<std::shared_ptr<Session>> owned_;  // every session with live threads
  std::uint64_t next_session_id_ = 0;

  struct Counters {
    std::atomic<std::uint64_t> connections{0};
    std::atomic<std::uint64_t> protocol_errors{0};
    std::atomic<std::uint64_t> published{0};
    std::atomic<std::uint64_t> delivered{0};
    std::atomic<std::uint64_t> dropped{0};
  } counters_;
};

/// Blocking client with a write buffer. Not thread-safe.
class Client {
 public:
  /// Connects and completes the Connect/ConnAck handshake. Throws
  /// Error(ConnectionError) on failure.
  static Client connect(const Endpoint& endpoint, std::string_view client_id,
                        std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

  Client(Client&& other) noexcept;
  Client& operator=(Client&& other) noexcept;
  ~Client();

  /// Waits for the SubAck; publishes arriving meanwhile stay queued for receive().
  void subscribe(const TopicFilter& filter, std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

  /// Buffered; sent once the buffer fills or on flush().
  void publish(std::string_view topic, std::span<const std::uint8_t> payload);
  void flush();
  /// Sends Ping and waits for Pong, which proves the broker has routed
  /// everything this client sent before it.
  void ping(std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));

  /// Next frame from the broker, or nullopt when the timeout passes. Throws
  /// Error(ConnectionError) once the connection is closed.
  std::optional<Frame> receive(std::chrono::milliseconds timeout);

  /// Raw bytes, bypassing the codec (for protocol tests).
  void send_raw(std::span<const std::uint8_t> bytes);

  void disconnect();
  bool connected() const noexcept { return fd_ >= 0; }

 private:
  Client() = default;
  void send_frame(const Frame& f);
  std::optional<Frame> read_frame(std::chrono::milliseconds timeout);
  Frame await(MsgType type, std::chrono::milliseconds timeout);
  void close_fd();

  int fd_ = -1;
  std::vector<std::uint8_t> out_;
  FrameDecoder decoder_;
  std::deque<Frame> pending_;
};

}  // namespace evfleet::ingest

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

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>

#include "evfleet/error.hpp"
#include "evfleet/ingest/net.hpp"
#include "socket_util.hpp"

namespace evfleet::ingest {

namespace detail {
namespace {

[[noreturn]] void conn_error(const std::string& what) {
  throw Error(ErrorCode::ConnectionError, what + ": " + std::strerror(errno));
}

addrinfo* resolve(const Endpoint& e, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const auto port = std::to_string(e.port);
  const int rc = ::getaddrinfo(e.host.empty() ? nullptr : e.host.c_str(), port.c_str(), &hints, &res);
  if (rc != 0) throw Error(ErrorCode::ConnectionError, "cannot resolve " + e.str() + ": " + ::gai_strerror(rc));
  return res;
}

}  // namespace

int listen_tcp(const Endpoint& endpoint, Endpoint* bound) {
  addrinfo* res = resolve(endpoint, true);
  int fd = -1;
  for (auto* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) conn_error("cannot listen on " + endpoint.str());
  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  *bound = endpoint;
  bound->port = ntohs(addr.ss_family == AF_INET6 ? reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port
                                                 : reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
  return fd;
}

int connect_tcp(const Endpoint& endpoint, int timeout_ms) {
  addrinfo* res = resolve(endpoint, false);
  int fd = -1;
  for (auto* ai = res; ai; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC | SOCK_NONBLOCK, ai->ai_protocol);
    if (fd < 0) continue;
    int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc != 0 && errno == EINPROGRESS) {
      pollfd p{fd, POLLOUT, 0};
      if (::poll(&p, 1, timeout_ms) == 1) {
        int err = 0;
        socklen_t len = sizeof err;
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
        rc = err == 0 ? 0 : -1;
        errno = err;
      } else {
        errno = ETIMEDOUT;
      }
    }
    if (rc == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) conn_error("cannot connect to " + endpoint.str());
  ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) & ~O_NONBLOCK);
  set_nodelay(fd);
  return fd;
}

void set_nodelay(int fd) {
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

bool send_all(int fd, std::span<const std::uint8_t> bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    const auto n = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace detail

namespace {
constexpr std::size_t kFlushThreshold = 64 * 1024;
using Clock = std::chrono::steady_clock;
}  // namespace

Client Client::connect(const Endpoint& endpoint, std::string_view client_id, std::chrono::milliseconds timeout) {
  Client c;
  c.fd_ = detail::connect_tcp(endpoint, static_cast<int>(timeout.count()));
  c.send_frame(make_text_frame(MsgType::Connect, client_id));
  c.flush();
  const auto ack = c.await(MsgType::ConnAck, timeout);
  if (parse_status_frame(ack) != 0) throw Error(ErrorCode::ConnectionError, "broker refused the connection");
  return c;
}

Client::Client(Client&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)),
      out_(std::move(other.out_)),
      decoder_(std::move(other.decoder_)),
      pending_(std::move(other.pending_)) {}

Client& Client::operator=(Client&& other) noexcept {
  if (this != &other) {
    close_fd();
    fd_ = std::exchange(other.fd_, -1);
    out_ = std::move(other.out_);
    decoder_ = std::move(other.decoder_);
    pending_ = std::move(other.pending_);
  }
  return *this;
}

Client::~Client() {
  try {
    disconnect();
  } catch (...) {
  }
}

void Client::close_fd() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
  out_.clear();
}

void Client::send_frame(const Frame& f) {
  if (fd_ < 0) throw Error(ErrorCode::ConnectionError, "not connected");
  append_frame(out_, f);
  if (out_.size() >= kFlushThreshold) flush();
}

void Client::publish(std::string_view topic, std::span<const std::uint8_t> payload) {
  send_frame(make_publish(topic, payload));
}

void Client::flush() {
  if (out_.empty()) return;
  if (fd_ < 0) throw Error(ErrorCode::ConnectionError, "not connected");
  if (!detail::send_all(fd_, out_)) {
    close_fd();
    throw Error(ErrorCode::ConnectionError, "connection lost while sending");
  }
  out_.clear();
}

void Client::send_raw(std::span<const std::uint8_t> bytes) {
  flush();
  if (!detail::send_all(fd_, bytes)) {
    close_fd();
    throw Error(ErrorCode::ConnectionError, "connection lost while sending");
  }
}

std::optional<Frame> Client::read_frame(std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  std::array<std::uint8_t, 64 * 1024> buf{};
  while (true) {
    if (auto f = decoder_.next()) return f;
    if (fd_ < 0) throw Error(ErrorCode::ConnectionError, "not connected");
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    pollfd p{fd_, POLLIN, 0};
    const int rc = ::poll(&p, 1, static_cast<int>(std::max<std::int64_t>(left, 0)));
    if (rc < 0 && errno == EINTR) continue;
    if (rc == 0) return std::nullopt;
    const auto n = ::recv(fd_, buf.data(), buf.size(), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      close_fd();
      throw Error(ErrorCode::ConnectionError, "connection closed by broker");
    }
    decoder_.feed(std::span(buf.data(), static_cast<std::size_t>(n)));
  }
}

Frame Client::await(MsgType type, std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  while (true) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    auto f = read_frame(std::max(left, std::chrono::milliseconds(0)));
    if (!f) {
      throw Error(ErrorCode::ConnectionError, "timed out waiting for " + std::string(msg_type_name(type)));
    }
    if (f->type == type) return std::move(*f);
    pending_.push_back(std::move(*f));
  }
}

void Client::subscribe(const TopicFilter& filter, std::chrono::milliseconds timeout) {
  send_frame(make_text_frame(MsgType::Subscribe, filter.str()));
  flush();
  const auto ack = await(MsgType::SubAck, timeout);
  if (parse_status_frame(ack) != 0) {
    throw Error(ErrorCode::ProtocolError, "broker rejected filter '" + filter.str() + "'");
  }
}

void Client::ping(std::chrono::milliseconds timeout) {
  send_frame(Frame{MsgType::Ping, {}});
  flush();
  await(MsgType::Pong, timeout);
}

std::optional<Frame> Client::receive(std::chrono::milliseconds timeout) {
  if (!pending_.empty()) {
    auto f = std::move(pending_.front());
    pending_.pop_front();
    return f;
  }
  return read_frame(timeout);
}

void Client::disconnect() {
  if (fd_ < 0) return;
  try {
    send_frame(Frame{MsgType::Disconnect, {}});
    flush();
  } catch (const Error&) {
  }
  if (fd_ >= 0) ::shutdown(fd_, SHUT_WR);
  close_fd();
}

}  // namespace evfleet::ingest

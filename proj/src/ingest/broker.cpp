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
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstring>

#include "evfleet/error.hpp"
#include "evfleet/ingest/net.hpp"
#include "evfleet/util/text.hpp"
#include "socket_util.hpp"

namespace evfleet::ingest {

using Bytes = std::shared_ptr<std::vector<std::uint8_t>>;

struct Broker::Session {
  int fd = -1;
  std::uint64_t id = 0;
  bool connected = false;            // reader thread only
  std::vector<TopicFilter> filters;  // guarded by routes_mu_

  std::mutex mu;
  std::condition_variable cv;
  std::deque<Bytes> queue;
  std::size_t queued_bytes = 0;
  bool closed = false;

  std::thread reader;
  std::thread writer;
  std::atomic<int> threads_done{0};
};

Endpoint parse_endpoint(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::UsageError, "endpoint '" + std::string(text) + "' is not host:port");
  }
  Endpoint e;
  const auto host = text.substr(0, colon);
  if (!host.empty()) e.host = std::string(host);
  const auto port = parse_int64(text.substr(colon + 1));
  if (!port || *port < 0 || *port > 65535) {
    throw Error(ErrorCode::UsageError, "endpoint '" + std::string(text) + "' has no valid port");
  }
  e.port = static_cast<std::uint16_t>(*port);
  return e;
}

Broker::Broker(BrokerOptions options) : options_(options) {}

Broker::~Broker() { stop(); }

void Broker::start(const Endpoint& listen) {
  if (running_) throw Error(ErrorCode::ConnectionError, "broker already running");
  listen_fd_ = detail::listen_tcp(listen, &bound_);
  stopping_ = false;
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

Endpoint Broker::endpoint() const { return bound_; }

BrokerStats Broker::stats() const {
  return {counters_.connections.load(), counters_.protocol_errors.load(), counters_.published.load(),
          counters_.delivered.load(), counters_.dropped.load()};
}

std::size_t Broker::session_count() const {
  std::shared_lock lock(routes_mu_);
  return sessions_.size();
}

void Broker::stop() {
  if (!running_.exchange(false)) return;
  stopping_ = true;
  if (acceptor_.joinable()) acceptor_.join();
  ::close(listen_fd_);
  listen_fd_ = -1;
  reap(true);
}

void Broker::accept_loop() {
  while (!stopping_) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int rc = ::poll(&p, 1, 100);
    reap(false);
    if (rc <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    detail::set_nodelay(fd);
    auto s = std::make_shared<Session>();
    s->fd = fd;
    counters_.connections++;
    {
      std::lock_guard lock(owned_mu_);
      s->id = next_session_id_++;
      owned_.push_back(s);
    }
    s->reader = std::thread([this, s] { read_loop(s); });
    s->writer = std::thread([this, s] { write_loop(s); });
  }
}

void Broker::reap(bool all) {
  std::vector<std::shared_ptr<Session>> done;
  {
    std::lock_guard lock(owned_mu_);
    auto it = std::partition(owned_.begin(), owned_.end(),
                             [all](const auto& s) { return !all && s->threads_done.load() < 2; });
    done.assign(it, owned_.end());
    owned_.erase(it, owned_.end());
  }
  for (auto& s : done) {
    close_session(*s);
    if (s->reader.joinable()) s->reader.join();
    if (s->writer.joinable()) s->writer.join();
    ::close(s->fd);
  }
  if (all) {
    std::unique_lock lock(routes_mu_);
    sessions_.clear();
  }
}

void Broker::close_session(Session& s) {
  {
    std::lock_guard lock(s.mu);
    s.closed = true;
  }
  ::shutdown(s.fd, SHUT_RDWR);
  s.cv.notify_all();
}

bool Broker::enqueue(Session& s, Bytes bytes, bool wait) {
  std::unique_lock lock(s.mu);
  if (s.closed) return false;
  if (s.queued_bytes + bytes->size() > options_.max_queue_bytes && !s.queue.empty()) {
    if (!wait) return false;
    const bool room = s.cv.wait_for(lock, options_.full_queue_wait, [&] {
      return s.closed || s.queued_bytes + bytes->size() <= options_.max_queue_bytes || s.queue.empty();
    });
    if (!room || s.closed) return false;
  }
  s.queued_bytes += bytes->size();
  s.queue.push_back(std::move(bytes));
  lock.unlock();
  s.cv.notify_all();
  return true;
}

void Broker::route(const Publish& p, const Bytes& bytes) {
  std::vector<std::shared_ptr<Session>> targets;
  {
    std::shared_lock lock(routes_mu_);
    for (const auto& s : sessions_) {
      if (std::any_of(s->filters.begin(), s->filters.end(), [&](const TopicFilter& f) { return f.matches(p.topic); })) {
        targets.push_back(s);
      }
    }
  }
  for (const auto& s : targets) {
    if (enqueue(*s, bytes, true)) {
      counters_.delivered++;
    } else {
      counters_.dropped++;
    }
  }
}

void Broker::read_loop(const std::shared_ptr<Session>& s) {
  FrameDecoder decoder;
  std::array<std::uint8_t, 64 * 1024> buf{};
  auto reply = [&](const Frame& f) { enqueue(*s, std::make_shared<std::vector<std::uint8_t>>(encode_frame(f)), true); };
  try {
    bool open = true;
    while (open && !stopping_) {
      const auto n = ::recv(s->fd, buf.data(), buf.size(), 0);
      if (n <= 0) break;
      decoder.feed(std::span(buf.data(), static_cast<std::size_t>(n)));
      while (open) {
        auto f = decoder.next();
        if (!f) break;
        if (!s->connected) {
          if (f->type != MsgType::Connect) throw Error(ErrorCode::ProtocolError, "first frame must be Connect");
          parse_text_frame(*f);
          s->connected = true;
          {
            std::unique_lock lock(routes_mu_);
            sessions_.push_back(s);
          }
          reply(make_status_frame(MsgType::ConnAck, 0));
          continue;
        }
        switch (f->type) {
          case MsgType::Publish: {
            const auto p = parse_publish(*f);
            if (!valid_topic(p.topic)) throw Error(ErrorCode::ProtocolError, "invalid publish topic");
            counters_.published++;
            route(p, std::make_shared<std::vector<std::uint8_t>>(encode_frame(*f)));
            break;
          }
          case MsgType::Subscribe: {
            const auto text = parse_text_frame(*f);
            std::uint8_t status = 0;
            try {
              auto filter = TopicFilter::parse(text);
              std::unique_lock lock(routes_mu_);
              s->filters.push_back(std::move(filter));
            } catch (const Error&) {
              status = 1;
            }
            reply(make_status_frame(MsgType::SubAck, status));
            break;
          }
          case MsgType::Ping:
            if (!f->body.empty()) throw Error(ErrorCode::ProtocolError, "Ping carries no body");
            reply(Frame{MsgType::Pong, {}});
            break;
          case MsgType::Disconnect:
            open = false;
            break;
          default:
            throw Error(ErrorCode::ProtocolError,
                        "clients may not send " + std::string(msg_type_name(f->type)));
        }
      }
    }
  } catch (const Error&) {
    counters_.protocol_errors++;
  }
  {
    std::unique_lock lock(routes_mu_);
    sessions_.erase(std::remove(sessions_.begin(), sessions_.end(), s), sessions_.end());
  }
  // Let the writer drain what is already queued (a Pong, a SubAck) before the
  // socket goes down.
  {
    std::lock_guard lock(s->mu);
    s->closed = true;
  }
  s->cv.notify_all();
  s->threads_done++;
}

void Broker::write_loop(const std::shared_ptr<Session>& s) {
  std::vector<std::uint8_t> out;
  std::deque<Bytes> batch;
  while (true) {
    {
      std::unique_lock lock(s->mu);
      s->cv.wait(lock, [&] { return s->closed || !s->queue.empty(); });
      if (s->queue.empty()) break;
      batch.swap(s->queue);
      s->queued_bytes = 0;
    }
    s->cv.notify_all();
    out.clear();
    for (const auto& b : batch) out.insert(out.end(), b->begin(), b->end());
    batch.clear();
    if (!detail::send_all(s->fd, out)) {
      std::lock_guard lock(s->mu);
      s->closed = true;
      s->queue.clear();
      s->queued_bytes = 0;
      break;
    }
  }
  s->cv.notify_all();
  ::shutdown(s->fd, SHUT_RDWR);
  s->threads_done++;
}

}  // namespace evfleet::ingest

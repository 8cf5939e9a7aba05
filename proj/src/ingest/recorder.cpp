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

#include "evfleet/ingest/recorder.hpp"

#include <algorithm>
#include <cmath>

#include "evfleet/util/text.hpp"

namespace evfleet::ingest {
namespace {

using Clock = std::chrono::steady_clock;

const core::Series& stream_of(const core::Trip& trip, std::size_t stream) {
  if (stream < core::kSignalCount) return trip.series[stream];
  return stream == core::kSignalCount ? trip.soc_trace : trip.odo_trace;
}

core::Series& stream_of(core::Trip& trip, std::size_t stream) {
  if (stream < core::kSignalCount) return trip.series[stream];
  return stream == core::kSignalCount ? trip.soc_trace : trip.odo_trace;
}

std::size_t sample_count(const core::Trip& trip) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < kStreamCount; ++k) n += stream_of(trip, k).size();
  return n;
}

}  // namespace

std::string_view stream_topic_name(std::size_t stream) {
  if (stream < core::kSignalCount) return core::signal_name(core::signal_at(stream));
  return stream == core::kSignalCount ? kSocTopicName : kOdometerTopicName;
}

std::optional<std::size_t> find_stream(std::string_view name) {
  if (auto id = core::find_signal(name)) return core::index_of(*id);
  if (name == kSocTopicName) return core::kSignalCount;
  if (name == kOdometerTopicName) return core::kSignalCount + 1;
  return std::nullopt;
}

std::size_t count_publishes(const core::Trip& trip) { return sample_count(trip); }

std::size_t replay_trip(Client& client, const core::Trip& trip, double speedup) {
  if (!(speedup > 0.0)) throw Error(ErrorCode::UsageError, "speedup must be positive");
  std::array<std::string, kStreamCount> topics;
  for (std::size_t k = 0; k < kStreamCount; ++k) topics[k] = signal_topic(trip.vehicle_id, stream_topic_name(k));

  // Merge the streams by timestamp; within one timestamp, stream order.
  std::array<std::size_t, kStreamCount> pos{};
  std::size_t published = 0;
  const bool paced = std::isfinite(speedup);
  const auto wall_start = Clock::now();
  std::optional<std::int64_t> first_t;
  try {
    while (true) {
      std::optional<std::int64_t> t;
      for (std::size_t k = 0; k < kStreamCount; ++k) {
        const auto& s = stream_of(trip, k);
        if (pos[k] < s.size() && (!t || s[pos[k]].t_ms < *t)) t = s[pos[k]].t_ms;
      }
      if (!t) break;
      if (paced) {
        if (!first_t) first_t = *t;
        const auto offset = std::chrono::duration<double, std::milli>(static_cast<double>(*t - *first_t) / speedup);
        const auto due = wall_start + std::chrono::duration_cast<Clock::duration>(offset);
        if (due > Clock::now()) {
          client.flush();
          std::this_thread::sleep_until(due);
        }
      }
      for (std::size_t k = 0; k < kStreamCount; ++k) {
        const auto& s = stream_of(trip, k);
        while (pos[k] < s.size() && s[pos[k]].t_ms == *t) {
          const auto payload = encode_telemetry({s[pos[k]].t_ms, s[pos[k]].value});
          client.publish(topics[k], payload);
          ++published;
          ++pos[k];
        }
      }
    }
    client.flush();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ConnectionError) throw;
    throw ReplayAbortedError(published, e.what());
  }
  return published;
}

std::size_t gateway_replay(const core::Trip& trip, const Endpoint& broker, double speedup) {
  auto client = Client::connect(broker, "gateway-" + trip.vehicle_id);
  const auto n = replay_trip(client, trip, speedup);
  try {
    client.ping();
  } catch (const Error& e) {
    throw ReplayAbortedError(n, e.what());
  }
  client.disconnect();
  return n;
}

TripAssembler::TripAssembler(TripSink sink, RecorderOptions options)
    : sink_(std::move(sink)), options_(options) {}

void TripAssembler::on_publish(const Publish& p) {
  const auto levels = split(p.topic, '/');
  std::optional<std::size_t> stream;
  if (levels.size() == 4 && levels[0] == "fleet" && levels[2] == "signal" && !levels[1].empty()) {
    stream = find_stream(levels[3]);
  }
  if (!stream || p.payload.size() != kTelemetryBytes) {
    stats_.samples_ignored++;
    return;
  }
  const auto t = decode_telemetry(p.payload);
  on_sample(std::string(levels[1]), *stream, {t.t_ms, t.value});
}

void TripAssembler::on_sample(const std::string& vehicle_id, std::size_t stream, core::TimedValue v) {
  if (stream >= kStreamCount) {
    stats_.samples_ignored++;
    return;
  }
  stats_.samples_received++;
  auto it = open_.find(vehicle_id);
  if (it != open_.end() && v.t_ms > it->second.last_ms + options_.gap_ms) {
    auto done = std::move(it->second);
    open_.erase(it);
    close(std::move(done));
    it = open_.end();
  }
  if (it == open_.end()) {
    OpenTrip o;
    o.trip.vehicle_id = vehicle_id;
    o.first_ms = o.last_ms = v.t_ms;
    it = open_.emplace(vehicle_id, std::move(o)).first;
  }
  auto& o = it->second;
  o.first_ms = std::min(o.first_ms, v.t_ms);
  o.last_ms = std::max(o.last_ms, v.t_ms);
  stream_of(o.trip, stream).push_back(v);
}

void TripAssembler::close(OpenTrip&& open) {
  auto& trip = open.trip;
  trip.start_ms = open.first_ms;
  trip.end_ms = open.last_ms + core::kSamplePeriodMs;
  trip.trip_id = core::make_trip_id(trip.vehicle_id, trip.start_ms);
  stats_.trips_completed++;
  deliver(std::move(trip));
}

bool TripAssembler::retry_pending() {
  while (!pending_.empty()) {
    try {
      sink_(pending_.front());
    } catch (const std::exception&) {
      stats_.write_failures++;
      return false;
    }
    stats_.trips_written++;
    pending_samples_ -= sample_count(pending_.front());
    pending_.pop_front();
  }
  return true;
}

void TripAssembler::deliver(core::Trip&& trip) {
  if (retry_pending()) {
    try {
      sink_(trip);
      stats_.trips_written++;
      return;
    } catch (const std::exception&) {
      stats_.write_failures++;
    }
  }
  const auto n = sample_count(trip);
  if (pending_samples_ + n > options_.max_buffered_samples) {
    stats_.dropped_data += n;
    return;
  }
  pending_samples_ += n;
  pending_.push_back(std::move(trip));
}

void TripAssembler::flush() {
  auto open = std::move(open_);
  open_.clear();
  for (auto& [vid, o] : open) close(std::move(o));
  retry_pending();
}

Recorder::Recorder(const Endpoint& broker, const TopicFilter& filter, TripSink sink, RecorderOptions options)
    : client_(Client::connect(broker, "recorder")), assembler_(std::move(sink), options) {
  client_.subscribe(filter);
  thread_ = std::thread([this] { run(); });
}

Recorder::~Recorder() {
  try {
    stop();
  } catch (...) {
  }
}

void Recorder::run() {
  while (!stop_) {
    std::optional<Frame> f;
    try {
      f = client_.receive(std::chrono::milliseconds(50));
    } catch (const Error&) {
      lost_ = true;
      break;
    }
    if (!f) continue;
    if (f->type != MsgType::Publish) continue;
    std::lock_guard lock(mu_);
    try {
      assembler_.on_publish(parse_publish(*f));
    } catch (const Error&) {
      // Malformed publish from some gateway; counted and skipped.
    }
    cv_.notify_all();
  }
  cv_.notify_all();
}

bool Recorder::wait_for_samples(std::uint64_t n, std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [&] { return assembler_.stats().samples_received >= n || lost_; }) &&
         assembler_.stats().samples_received >= n;
}

void Recorder::stop() {
  stop_ = true;
  if (thread_.joinable()) thread_.join();
  std::lock_guard lock(mu_);
  if (stopped_) return;
  stopped_ = true;
  client_.disconnect();
  assembler_.flush();
}

RecorderStats Recorder::stats() const {
  std::lock_guard lock(mu_);
  return assembler_.stats();
}

}  // namespace evfleet::ingest

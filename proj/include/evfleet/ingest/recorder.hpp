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
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "evfleet/core/trip.hpp"
#include "evfleet/error.hpp"
#include "evfleet/ingest/net.hpp"

namespace evfleet::ingest {

/// Topic names of the two traces next to the 15 catalog signals.
inline constexpr const char* kSocTopicName = "soc";
inline constexpr const char* kOdometerTopicName = "odometer";
/// Streams per trip on the wire: 15 signals, soc, odometer.
inline constexpr std::size_t kStreamCount = core::kSignalCount + 2;

std::string_view stream_topic_name(std::size_t stream);
std::optional<std::size_t> find_stream(std::string_view name);

/// Publishes a gateway would emit for this trip (one per sample).
std::size_t count_publishes(const core::Trip& trip);

/// Thrown when the broker connection drops mid-replay.
class ReplayAbortedError : public Error {
 public:
  ReplayAbortedError(std::size_t published, const std::string& why)
      : Error(ErrorCode::ReplayAborted, "replay aborted after " + std::to_string(published) + " publishes: " + why),
        published_(published) {}
  std::size_t published() const noexcept { return published_; }

 private:
  std::size_t published_;
};

inline constexpr double kFlatOut = std::numeric_limits<double>::infinity();

/// Publishes every sample of the trip, timestamp by timestamp, to
/// fleet/<vehicle_id>/signal/<name>; successive timestamps are spaced by
/// their difference divided by speedup (kFlatOut: no pacing). Returns the
/// number of publishes. Throws ReplayAbortedError on connection loss.
std::size_t replay_trip(Client& client, const core::Trip& trip, double speedup = kFlatOut);

/// Connects as a gateway, replays one trip and disconnects.
std::size_t gateway_replay(const core::Trip& trip, const Endpoint& broker, double speedup = kFlatOut);

struct RecorderOptions {
  /// Silence longer than this splits a vehicle's samples into two trips.
  std::int64_t gap_ms = 60'000;
  /// Samples held for trips the sink failed to take before new ones are dropped.
  std::size_t max_buffered_samples = 20'000'000;
};

struct RecorderStats {
  std::uint64_t samples_received = 0;
  std::uint64_t samples_ignored = 0;  // foreign topics or malformed payloads
  std::uint64_t trips_completed = 0;
  std::uint64_t trips_written = 0;
  std::uint64_t write_failures = 0;
  std::uint64_t dropped_data = 0;  // samples lost because the buffer was full
};

/// Receives a finished trip; throws to signal a failed write.
using TripSink = std::function<void(const core::Trip&)>;

/// Reassembles trips from telemetry publishes. Samples are grouped per
/// vehicle; a gap longer than gap_ms closes the open trip. A closed trip
/// spans [first sample, last sample + 100 ms) and gets the canonical trip id.
class TripAssembler {
 public:
  explicit TripAssembler(TripSink sink, RecorderOptions options = {});

  void on_publish(const Publish& p);
  void on_sample(const std::string& vehicle_id, std::size_t stream, core::TimedValue v);
  /// Closes every open trip and retries buffered ones.
  void flush();

  const RecorderStats& stats() const noexcept { return stats_; }
  std::size_t buffered_trips() const noexcept { return pending_.size(); }

 private:
  struct OpenTrip {
    core::Trip trip;
    std::int64_t first_ms = 0;
    std::int64_t last_ms = 0;
  };
  void close(OpenTrip&& open);
  void deliver(core::Trip&& trip);
  bool retry_pending();

  TripSink sink_;
  RecorderOptions options_;
  std::map<std::string, OpenTrip> open_;
  std::deque<core::Trip> pending_;
  std::size_t pending_samples_ = 0;
  RecorderStats stats_;
};

/// Subscription that feeds a TripAssembler from a background thread.
class Recorder {
 public:
  /// Connects and subscribes before returning, so every publish routed
  /// afterwards reaches the recorder. Throws Error(ConnectionError).
  Recorder(const Endpoint& broker, const TopicFilter& filter, TripSink sink, RecorderOptions options = {});
  ~Recorder();
  Recorder(const Recorder&) = delete;
  Recorder& operator=(const Recorder&) = delete;

  /// Blocks until `n` samples have arrived or the timeout passes.
  bool wait_for_samples(std::uint64_t n, std::chrono::milliseconds timeout);
  /// Stops receiving and closes every open trip. Idempotent.
  void stop();

  RecorderStats stats() const;
  /// Set when the broker connection dropped.
  bool connection_lost() const noexcept { return lost_; }

 private:
  void run();

  Client client_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  TripAssembler assembler_;
  std::atomic<bool> stop_{false};
  std::atomic<bool> lost_{false};
  bool stopped_ = false;
  std::thread thread_;
};

}  // namespace evfleet::ingest

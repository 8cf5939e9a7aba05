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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evfleet::ingest {

enum class MsgType : std::uint8_t {
  Connect = 0x01,
  ConnAck = 0x02,
  Subscribe = 0x03,
  SubAck = 0x04,
  Publish = 0x05,
  Ping = 0x06,
  Pong = 0x07,
  Disconnect = 0x08,
};

std::string_view msg_type_name(MsgType type) noexcept;
bool is_known_msg_type(std::uint8_t raw) noexcept;

/// Largest encoded frame, header included.
inline constexpr std::size_t kMaxFrameBytes = std::size_t{1} << 24;
inline constexpr std::size_t kFrameHeaderBytes = 5;

/// Wire layout: u32 BE length of (type + body) | u8 type | body.
struct Frame {
  MsgType type = MsgType::Ping;
  std::vector<std::uint8_t> body;

  bool operator==(const Frame&) const = default;
};

/// Throws Error(ProtocolError) when the frame would exceed kMaxFrameBytes.
std::vector<std::uint8_t> encode_frame(const Frame& frame);
void append_frame(std::vector<std::uint8_t>& out, const Frame& frame);

/// Exactly one frame; truncated, oversized, trailing bytes or an unknown
/// type throw Error(ProtocolError).
Frame decode_frame(std::span<const std::uint8_t> bytes);

/// Incremental decoder for a byte stream.
class FrameDecoder {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  /// Next complete frame, or nullopt if more bytes are needed. Throws
  /// Error(ProtocolError) on an oversized length or unknown type.
  std::optional<Frame> next();
  std::size_t buffered() const noexcept { return buf_.size() - pos_; }

 private:
  std::vector<std::uint8_t> buf_;
  std::size_t pos_ = 0;
};

/// Text fields (topics, filters, client ids) are u16 BE length | UTF-8 bytes
/// without NUL.
bool valid_wire_text(std::string_view text) noexcept;

struct Publish {
  std::string topic;
  std::vector<std::uint8_t> payload;

  bool operator==(const Publish&) const = default;
};

Frame make_publish(std::string_view topic, std::span<const std::uint8_t> payload);
Publish parse_publish(const Frame& frame);

/// Connect and Subscribe carry a single text field (client id, filter).
Frame make_text_frame(MsgType type, std::string_view text);
std::string parse_text_frame(const Frame& frame);

/// SubAck/ConnAck body: one status byte, 0 = accepted.
Frame make_status_frame(MsgType type, std::uint8_t status);
std::uint8_t parse_status_frame(const Frame& frame);

/// Telemetry payload: i64 BE t_ms | f64 BE value (IEEE 754 bits).
struct Telemetry {
  std::int64_t t_ms = 0;
  double value = 0.0;
};

inline constexpr std::size_t kTelemetryBytes = 16;

std::array<std::uint8_t, kTelemetryBytes> encode_telemetry(const Telemetry& t) noexcept;
/// Throws Error(ProtocolError) unless the payload is exactly 16 bytes.
Telemetry decode_telemetry(std::span<const std::uint8_t> payload);

}  // namespace evfleet::ingest

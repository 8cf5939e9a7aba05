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

#include "evfleet/ingest/codec.hpp"

#include <bit>
#include <cstring>

#include "evfleet/error.hpp"

namespace evfleet::ingest {
namespace {

[[noreturn]] void protocol(const std::string& msg) { throw Error(ErrorCode::ProtocolError, msg); }

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = (v << 8) | p[i];
  return v;
}

void put_text(std::vector<std::uint8_t>& out, std::string_view text) {
  if (!valid_wire_text(text)) protocol("text field is not NUL-free UTF-8 of at most 65535 bytes");
  put_u16(out, static_cast<std::uint16_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
}

// Returns the text and advances `pos` past it.
std::string get_text(std::span<const std::uint8_t> body, std::size_t& pos) {
  if (body.size() < pos + 2) protocol("text length truncated");
  const std::size_t len = (std::size_t{body[pos]} << 8) | body[pos + 1];
  pos += 2;
  if (body.size() < pos + len) protocol("text field truncated");
  std::string text(reinterpret_cast<const char*>(body.data() + pos), len);
  pos += len;
  if (!valid_wire_text(text)) protocol("text field is not NUL-free UTF-8");
  return text;
}

void expect_type(const Frame& frame, MsgType type) {
  if (frame.type != type) {
    protocol("expected " + std::string(msg_type_name(type)) + ", got " + std::string(msg_type_name(frame.type)));
  }
}

}  // namespace

std::string_view msg_type_name(MsgType type) noexcept {
  switch (type) {
    case MsgType::Connect: return "Connect";
    case MsgType::ConnAck: return "ConnAck";
    case MsgType::Subscribe: return "Subscribe";
    case MsgType::SubAck: return "SubAck";
    case MsgType::Publish: return "Publish";
    case MsgType::Ping: return "Ping";
    case MsgType::Pong: return "Pong";
    case MsgType::Disconnect: return "Disconnect";
  }
  return "Unknown";
}

bool is_known_msg_type(std::uint8_t raw) noexcept { return raw >= 0x01 && raw <= 0x08; }

void append_frame(std::vector<std::uint8_t>& out, const Frame& frame) {
  if (frame.body.size() + kFrameHeaderBytes > kMaxFrameBytes) protocol("frame exceeds 2^24 bytes");
  put_u32(out, static_cast<std::uint32_t>(frame.body.size() + 1));
  out.push_back(static_cast<std::uint8_t>(frame.type));
  out.insert(out.end(), frame.body.begin(), frame.body.end());
}

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
  std::vector<std::uint8_t> out;
  out.reserve(frame.body.size() + kFrameHeaderBytes);
  append_frame(out, frame);
  return out;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  FrameDecoder d;
  d.feed(bytes);
  auto f = d.next();
  if (!f) protocol("truncated frame (" + std::to_string(bytes.size()) + " bytes)");
  if (d.buffered() != 0) protocol("trailing bytes after frame");
  return std::move(*f);
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  if (pos_ > 0 && pos_ * 2 >= buf_.size()) {
    buf_.erase(buf_.begin(), buf_.begin() + static_cast<std::ptrdiff_t>(pos_));
    pos_ = 0;
  }
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

std::optional<Frame> FrameDecoder::next() {
  const auto avail = buf_.size() - pos_;
  if (avail < 4) return std::nullopt;
  const std::size_t len = get_u32(buf_.data() + pos_);
  if (len == 0) protocol("zero-length frame");
  if (len + 4 > kMaxFrameBytes) protocol("frame length " + std::to_string(len) + " exceeds limit");
  if (avail >= 5 && !is_known_msg_type(buf_[pos_ + 4])) {
    protocol("unknown message type " + std::to_string(buf_[pos_ + 4]));
  }
  if (avail < len + 4) return std::nullopt;
  Frame f;
  f.type = static_cast<MsgType>(buf_[pos_ + 4]);
  const auto* body = buf_.data() + pos_ + 5;
  f.body.assign(body, body + (len - 1));
  pos_ += len + 4;
  if (pos_ == buf_.size()) {
    buf_.clear();
    pos_ = 0;
  }
  return f;
}

bool valid_wire_text(std::string_view text) noexcept {
  if (text.size() > 0xFFFF) return false;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == 0) return false;
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and values past U+10FFFF.
    static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

Frame make_publish(std::string_view topic, std::span<const std::uint8_t> payload) {
  Frame f{MsgType::Publish, {}};
  f.body.reserve(2 + topic.size() + payload.size());
  put_text(f.body, topic);
  f.body.insert(f.body.end(), payload.begin(), payload.end());
  return f;
}

Publish parse_publish(const Frame& frame) {
  expect_type(frame, MsgType::Publish);
  std::size_t pos = 0;
  Publish p;
  p.topic = get_text(frame.body, pos);
  p.payload.assign(frame.body.begin() + static_cast<std::ptrdiff_t>(pos), frame.body.end());
  return p;
}

Frame make_text_frame(MsgType type, std::string_view text) {
  Frame f{type, {}};
  put_text(f.body, text);
  return f;
}

std::string parse_text_frame(const Frame& frame) {
  std::size_t pos = 0;
  auto text = get_text(frame.body, pos);
  if (pos != frame.body.size()) protocol("trailing bytes in " + std::string(msg_type_name(frame.type)));
  return text;
}

Frame make_status_frame(MsgType type, std::uint8_t status) { return Frame{type, {status}}; }

std::uint8_t parse_status_frame(const Frame& frame) {
  if (frame.body.size() != 1) protocol(std::string(msg_type_name(frame.type)) + " body must be one byte");
  return frame.body[0];
}

std::array<std::uint8_t, kTelemetryBytes> encode_telemetry(const Telemetry& t) noexcept {
  std::array<std::uint8_t, kTelemetryBytes> out{};
  const auto ts = static_cast<std::uint64_t>(t.t_ms);
  const auto vb = std::bit_cast<std::uint64_t>(t.value);
  for (int i = 0; i < 8; ++i) {
    out[i] = static_cast<std::uint8_t>(ts >> (56 - 8 * i));
    out[8 + i] = static_cast<std::uint8_t>(vb >> (56 - 8 * i));
  }
  return out;
}

Telemetry decode_telemetry(std::span<const std::uint8_t> payload) {
  if (payload.size() != kTelemetryBytes) {
    protocol("telemetry payload must be 16 bytes, got " + std::to_string(payload.size()));
  }
  return Telemetry{static_cast<std::int64_t>(get_u64(payload.data())),
                   std::bit_cast<double>(get_u64(payload.data() + 8))};
}

}  // namespace evfleet::ingest

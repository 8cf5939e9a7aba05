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

#include "evfleet/ingest/topic.hpp"

#include "evfleet/error.hpp"
#include "evfleet/ingest/codec.hpp"
#include "evfleet/util/text.hpp"

namespace evfleet::ingest {

TopicFilter TopicFilter::parse(std::string_view text) {
  if (text.empty() || !valid_wire_text(text)) {
    throw Error(ErrorCode::ProtocolError, "topic filter must be non-empty UTF-8 without NUL");
  }
  TopicFilter f;
  f.text_ = std::string(text);
  const auto parts = split(text, '/');
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto level = parts[i];
    if (level == "#" && i + 1 != parts.size()) {
      throw Error(ErrorCode::ProtocolError, "'#' must be the last level of '" + f.text_ + "'");
    }
    if (level.size() > 1 && level.find_first_of("+#") != std::string_view::npos) {
      throw Error(ErrorCode::ProtocolError, "wildcards must fill a whole level in '" + f.text_ + "'");
    }
    f.levels_.emplace_back(level);
  }
  return f;
}

bool TopicFilter::matches(std::string_view topic) const noexcept {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const auto& level = levels_[i];
    if (level == "#") return true;
    if (pos > topic.size()) return false;  // topic ran out of levels
    auto end = topic.find('/', pos);
    if (end == std::string_view::npos) end = topic.size();
    const auto tl = topic.substr(pos, end - pos);
    if (level != "+" && level != tl) return false;
    pos = end + 1;
  }
  return pos == topic.size() + 1;
}

bool topic_matches(const TopicFilter& filter, std::string_view topic) noexcept { return filter.matches(topic); }

bool valid_topic(std::string_view topic) noexcept {
  return !topic.empty() && valid_wire_text(topic) && topic.find_first_of("+#") == std::string_view::npos;
}

std::string signal_topic(std::string_view vehicle_id, std::string_view signal_name) {
  std::string t = "fleet/";
  t += vehicle_id;
  t += "/signal/";
  t += signal_name;
  return t;
}

}  // namespace evfleet::ingest

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

#include <string>
#include <string_view>
#include <vector>

namespace evfleet::ingest {

/// Subscription pattern split on '/'. Each level is a literal, "+" (exactly
/// one level) or "#" (zero or more trailing levels, final position only).
class TopicFilter {
 public:
  /// Throws Error(ProtocolError) on an empty filter, invalid text, "#" before
  /// the end, or a wildcard mixed into a literal level.
  static TopicFilter parse(std::string_view text);

  const std::vector<std::string>& levels() const noexcept { return levels_; }
  const std::string& str() const noexcept { return text_; }

  bool matches(std::string_view topic) const noexcept;

  bool operator==(const TopicFilter& other) const { return text_ == other.text_; }

 private:
  std::string text_;
  std::vector<std::string> levels_;
};

bool topic_matches(const TopicFilter& filter, std::string_view topic) noexcept;

/// Publish topics: non-empty wire text without '+' or '#'.
bool valid_topic(std::string_view topic) noexcept;

/// "fleet/<vehicle_id>/signal/<name>"
std::string signal_topic(std::string_view vehicle_id, std::string_view signal_name);

}  // namespace evfleet::ingest

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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evfleet/core/trip.hpp"

namespace evfleet::store {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kSocStream = "soc";
inline constexpr const char* kOdoStream = "odo";

struct StreamInfo {
  std::string name;  // catalog signal name, "soc" or "odo"
  std::size_t samples = 0;

  bool operator==(const StreamInfo&) const = default;
};

struct TripManifest {
  std::string trip_id;
  std::string vehicle_id;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  /// The 15 catalog signals in catalog order, then soc and odo.
  std::vector<StreamInfo> streams;
  std::string schema_version = kSchemaVersion;

  bool operator==(const TripManifest&) const = default;
};

TripManifest manifest_of(const core::Trip& trip);

/// Directory of one trip: <root>/<vehicle_id>/<trip_id>.
std::filesystem::path trip_dir(const std::filesystem::path& root, const std::string& vehicle_id,
                               const std::string& trip_id);

/// Writes manifest.json plus one "t_ms,value" CSV per stream into a staging
/// directory and renames it into place. Throws Error(AlreadyExists) if the
/// trip directory exists, Error(IoError) on filesystem failures and
/// Error(StructuralError) for a structurally invalid trip.
std::filesystem::path write_trip(const std::filesystem::path& root, const core::Trip& trip);

/// Throws Error(CorruptTrip) naming the offending file when anything is
/// missing, malformed, or disagrees with the manifest.
core::Trip read_trip(const std::filesystem::path& root, const std::string& vehicle_id, const std::string& trip_id);

/// Manifests ordered by (vehicle_id, trip_id); a missing or empty root gives
/// an empty list. Entries whose names start with '.' or '_' are not trips
/// (staging directories, artifacts) and are skipped.
std::vector<TripManifest> list_trips(const std::filesystem::path& root,
                                     const std::optional<std::string>& vehicle_filter = std::nullopt);

}  // namespace evfleet::store

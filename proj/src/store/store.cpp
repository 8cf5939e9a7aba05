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

#include "evfleet/store/store.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>

#include "evfleet/error.hpp"
#include "evfleet/util/text.hpp"
#include "json.hpp"

namespace evfleet::store {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kCsvHeader = "t_ms,value";

void check_component(const std::string& name, const char* what) {
  if (name.empty() || name.front() == '.' || name.front() == '_' ||
      name.find_first_of("/\\") != std::string::npos || name.find('\0') != std::string::npos) {
    throw Error(ErrorCode::StructuralError, std::string(what) + " '" + name + "' is not a usable directory name");
  }
}

std::vector<const core::Series*> streams_of(const core::Trip& trip) {
  std::vector<const core::Series*> out;
  for (const auto& s : trip.series) out.push_back(&s);
  out.push_back(&trip.soc_trace);
  out.push_back(&trip.odo_trace);
  return out;
}

std::vector<std::string> stream_names() {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < core::kSignalCount; ++i) names.emplace_back(core::signal_name(core::signal_at(i)));
  names.emplace_back(kSocStream);
  names.emplace_back(kOdoStream);
  return names;
}

std::string series_csv(const core::Series& series) {
  std::string out;
  out.reserve(series.size() * 28 + 16);
  out += kCsvHeader;
  out += '\n';
  for (const auto& p : series) {
    out += std::to_string(p.t_ms);
    out += ',';
    append_double(out, p.value);
    out += '\n';
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  os.close();
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

std::string manifest_text(const TripManifest& m) {
  json streams = json::array();
  for (const auto& s : m.streams) streams.push_back({{"name", s.name}, {"file", s.name + ".csv"}, {"samples", s.samples}});
  const json j{{"schema_version", m.schema_version},
               {"trip_id", m.trip_id},
               {"vehicle_id", m.vehicle_id},
               {"start_ms", m.start_ms},
               {"end_ms", m.end_ms},
               {"streams", streams}};
  return j.dump(1) + "\n";
}

[[noreturn]] void corrupt(const fs::path& file, const std::string& why) {
  throw Error(ErrorCode::CorruptTrip, file.string() + ": " + why);
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) corrupt(path, "missing or unreadable");
  std::ostringstream ss;
  ss << is.rdbuf();
  if (is.bad()) corrupt(path, "read failed");
  return std::move(ss).str();
}

TripManifest parse_manifest(const fs::path& path) {
  const auto text = read_file(path);
  try {
    const auto j = json::parse(text);
    TripManifest m;
    m.schema_version = j.at("schema_version").get<std::string>();
    if (m.schema_version != kSchemaVersion) corrupt(path, "unsupported schema_version " + m.schema_version);
    m.trip_id = j.at("trip_id").get<std::string>();
    m.vehicle_id = j.at("vehicle_id").get<std::string>();
    m.start_ms = j.at("start_ms").get<std::int64_t>();
    m.end_ms = j.at("end_ms").get<std::int64_t>();
    for (const auto& s : j.at("streams")) {
      m.streams.push_back({s.at("name").get<std::string>(), s.at("samples").get<std::size_t>()});
    }
    const auto expected = stream_names();
    if (m.streams.size() != expected.size()) corrupt(path, "wrong number of streams");
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (m.streams[i].name != expected[i]) corrupt(path, "unexpected stream '" + m.streams[i].name + "'");
    }
    return m;
  } catch (const json::exception& e) {
    corrupt(path, e.what());
  }
}

core::Series parse_series(const fs::path& path, std::size_t expected) {
  const auto text = read_file(path);
  std::string_view rest = text;
  auto next_line = [&rest]() -> std::optional<std::string_view> {
    if (rest.empty()) return std::nullopt;
    const auto nl = rest.find('\n');
    if (nl == std::string_view::npos) return std::nullopt;  // every line ends in '\n'
    auto line = rest.substr(0, nl);
    rest.remove_prefix(nl + 1);
    return line;
  };
  const auto header = next_line();
  if (!header || *header != kCsvHeader) corrupt(path, "bad header");
  core::Series series;
  series.reserve(expected);
  while (auto line = next_line()) {
    const auto comma = line->find(',');
    if (comma == std::string_view::npos) corrupt(path, "line " + std::to_string(series.size() + 2) + " lacks a comma");
    const auto t = parse_int64(line->substr(0, comma));
    const auto v = parse_double(line->substr(comma + 1));
    if (!t || !v) corrupt(path, "line " + std::to_string(series.size() + 2) + " does not parse");
    series.push_back({*t, *v});
  }
  if (!rest.empty()) corrupt(path, "truncated final line");
  if (series.size() != expected) {
    corrupt(path, "holds " + std::to_string(series.size()) + " samples, manifest says " + std::to_string(expected));
  }
  return series;
}

std::vector<fs::path> sorted_subdirs(const fs::path& dir) {
  std::vector<fs::path> out;
  std::error_code ec;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    const auto name = it->path().filename().string();
    if (name.empty() || name.front() == '.' || name.front() == '_') continue;
    if (it->is_directory(ec)) out.push_back(it->path());
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return out;
}

}  // namespace

TripManifest manifest_of(const core::Trip& trip) {
  TripManifest m;
  m.trip_id = trip.trip_id;
  m.vehicle_id = trip.vehicle_id;
  m.start_ms = trip.start_ms;
  m.end_ms = trip.end_ms;
  const auto names = stream_names();
  const auto streams = streams_of(trip);
  for (std::size_t i = 0; i < names.size(); ++i) m.streams.push_back({names[i], streams[i]->size()});
  return m;
}

fs::path trip_dir(const fs::path& root, const std::string& vehicle_id, const std::string& trip_id) {
  return root / vehicle_id / trip_id;
}

fs::path write_trip(const fs::path& root, const core::Trip& trip) {
  core::check_structure(trip);
  check_component(trip.vehicle_id, "vehicle id");
  check_component(trip.trip_id, "trip id");

  const auto final_dir = trip_dir(root, trip.vehicle_id, trip.trip_id);
  std::error_code ec;
  if (fs::exists(final_dir, ec)) {
    throw Error(ErrorCode::AlreadyExists, "trip " + trip.trip_id + " already stored at " + final_dir.string());
  }
  const auto vehicle_dir = root / trip.vehicle_id;
  fs::create_directories(vehicle_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + vehicle_dir.string() + ": " + ec.message());

  static std::atomic<unsigned> counter{0};
  const auto staging =
      vehicle_dir / ("." + trip.trip_id + ".tmp" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(staging, ec);
  if (!fs::create_directory(staging, ec) || ec) {
    throw Error(ErrorCode::IoError, "cannot create " + staging.string() + ": " + ec.message());
  }

  try {
    const auto names = stream_names();
    const auto streams = streams_of(trip);
    for (std::size_t i = 0; i < names.size(); ++i) write_file(staging / (names[i] + ".csv"), series_csv(*streams[i]));
    write_file(staging / kManifestFile, manifest_text(manifest_of(trip)));
    fs::rename(staging, final_dir, ec);
    if (ec) {
      if (fs::exists(final_dir)) {
        throw Error(ErrorCode::AlreadyExists, "trip " + trip.trip_id + " already stored at " + final_dir.string());
      }
      throw Error(ErrorCode::IoError, "cannot move trip into " + final_dir.string() + ": " + ec.message());
    }
  } catch (...) {
    std::error_code ignore;
    fs::remove_all(staging, ignore);
    throw;
  }
  return final_dir;
}

core::Trip read_trip(const fs::path& root, const std::string& vehicle_id, const std::string& trip_id) {
  const auto dir = trip_dir(root, vehicle_id, trip_id);
  const auto m = parse_manifest(dir / kManifestFile);
  if (m.vehicle_id != vehicle_id || m.trip_id != trip_id) {
    corrupt(dir / kManifestFile, "manifest names a different trip");
  }
  core::Trip trip;
  trip.trip_id = m.trip_id;
  trip.vehicle_id = m.vehicle_id;
  trip.start_ms = m.start_ms;
  trip.end_ms = m.end_ms;
  for (std::size_t i = 0; i < core::kSignalCount; ++i) {
    trip.series[i] = parse_series(dir / (m.streams[i].name + ".csv"), m.streams[i].samples);
  }
  trip.soc_trace = parse_series(dir / "soc.csv", m.streams[core::kSignalCount].samples);
  trip.odo_trace = parse_series(dir / "odo.csv", m.streams[core::kSignalCount + 1].samples);
  try {
    core::check_structure(trip);
  } catch (const Error& e) {
    corrupt(dir, e.what());
  }
  return trip;
}

std::vector<TripManifest> list_trips(const fs::path& root, const std::optional<std::string>& vehicle_filter) {
  std::vector<TripManifest> out;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) return out;
  for (const auto& vdir : sorted_subdirs(root)) {
    if (vehicle_filter && vdir.filename().string() != *vehicle_filter) continue;
    for (const auto& tdir : sorted_subdirs(vdir)) out.push_back(parse_manifest(tdir / kManifestFile));
  }
  return out;
}

}  // namespace evfleet::store

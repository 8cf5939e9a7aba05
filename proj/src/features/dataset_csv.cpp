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

#include <istream>
#include <ostream>
#include <sstream>

#include "evfleet/error.hpp"
#include "evfleet/features/features.hpp"
#include "evfleet/util/text.hpp"

namespace evfleet::features {

void write_dataset_csv(const Dataset& ds, std::ostream& os) {
  const auto width = ds.feature_count() == 0 ? core::kSignalCount * 6 : ds.feature_count();
  std::string line = "vehicle_id,trip_id,section_index";
  for (std::size_t i = 1; i <= width; ++i) line += ",x" + std::to_string(i);
  line += ",gamma\n";
  os << line;
  for (const auto& s : ds.samples()) {
    line.clear();
    line += s.vehicle_id;
    line += ',';
    line += s.trip_id;
    line += ',';
    line += std::to_string(s.section_index);
    for (double v : s.x) {
      line += ',';
      append_double(line, v);
    }
    line += ',';
    append_double(line, s.gamma);
    line += '\n';
    os << line;
  }
}

std::string dataset_csv(const Dataset& ds) {
  std::ostringstream os;
  write_dataset_csv(ds, os);
  return os.str();
}

Dataset read_dataset_csv(std::istream& is, const FeatureConfig& config) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::CorruptDataset, "missing header");
  const auto header = split(trim(line), ',');
  if (header.size() < 5 || header[0] != "vehicle_id" || header[1] != "trip_id" || header[2] != "section_index" ||
      header.back() != "gamma") {
    throw Error(ErrorCode::CorruptDataset, "unexpected header");
  }
  const std::size_t width = header.size() - 4;
  for (std::size_t i = 0; i < width; ++i) {
    if (header[3 + i] != "x" + std::to_string(i + 1)) throw Error(ErrorCode::CorruptDataset, "unexpected header");
  }

  std::vector<TripSection> samples;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    const auto where = "dataset line " + std::to_string(line_no);
    if (fields.size() != header.size()) throw Error(ErrorCode::CorruptDataset, where + ": wrong field count");
    TripSection s;
    s.vehicle_id = std::string(fields[0]);
    s.trip_id = std::string(fields[1]);
    const auto index = parse_int64(fields[2]);
    if (!index || *index < 0) throw Error(ErrorCode::CorruptDataset, where + ": bad section_index");
    s.section_index = static_cast<std::size_t>(*index);
    s.x.resize(width);
    for (std::size_t i = 0; i < width; ++i) {
      const auto v = parse_double(fields[3 + i]);
      if (!v) throw Error(ErrorCode::CorruptDataset, where + ": bad number");
      s.x[i] = *v;
    }
    const auto gamma = parse_double(fields.back());
    if (!gamma) throw Error(ErrorCode::CorruptDataset, where + ": bad gamma");
    s.gamma = *gamma;
    s.t0_ms = static_cast<std::int64_t>(s.section_index) * config.section_ms;
    s.t1_ms = s.t0_ms + config.section_ms;
    samples.push_back(std::move(s));
  }
  try {
    return Dataset(std::move(samples));
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptDataset, e.what());
  }
}

}  // namespace evfleet::features

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

#include "evfleet/error.hpp"
#include "evfleet/synthfleet/synthfleet.hpp"

namespace evfleet::synthfleet {
namespace {

// Linear scan over the trace; the first or last segment is extended when t
// falls outside the sampled span.
double trace_value(const core::Series& trace, std::int64_t t) {
  if (trace.size() == 1) return trace.front().value;
  std::size_t seg = 0;
  while (seg + 2 < trace.size() && trace[seg + 1].t_ms < t) ++seg;
  const auto& a = trace[seg];
  const auto& b = trace[seg + 1];
  const double w = static_cast<double>(t - a.t_ms) / static_cast<double>(b.t_ms - a.t_ms);
  return a.value + w * (b.value - a.value);
}

}  // namespace

double oracle_gamma(const core::Trip& trip, std::int64_t t0_ms, std::int64_t t1_ms) {
  if (!(t0_ms < t1_ms) || t0_ms < trip.start_ms || t1_ms > trip.end_ms) {
    throw Error(ErrorCode::ParamError, "window must satisfy start <= t0 < t1 <= end");
  }
  const double soc0 = trace_value(trip.soc_trace, t0_ms);
  const double soc1 = trace_value(trip.soc_trace, t1_ms);
  const double km0 = trace_value(trip.odo_trace, t0_ms);
  const double km1 = trace_value(trip.odo_trace, t1_ms);
  if (km1 == km0) throw Error(ErrorCode::ZeroDistance, "odometer does not advance in " + trip.trip_id);
  return (soc1 - soc0) / (km1 - km0);
}

}  // namespace evfleet::synthfleet

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
#include <span>

#include "evfleet/ingest/net.hpp"

namespace evfleet::ingest::detail {

/// Bound, listening socket; `bound` receives the actual address and port.
/// Throws Error(ConnectionError).
int listen_tcp(const Endpoint& endpoint, Endpoint* bound);

/// Throws Error(ConnectionError).
int connect_tcp(const Endpoint& endpoint, int timeout_ms);

void set_nodelay(int fd);

/// False once the peer is gone.
bool send_all(int fd, std::span<const std::uint8_t> bytes);

}  // namespace evfleet::ingest::detail

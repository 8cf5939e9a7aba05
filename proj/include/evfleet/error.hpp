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

#include <stdexcept>
#include <string>
#include <string_view>

namespace evfleet {

/// Error kinds raised by the library. Each kind belongs to one module and is
/// reported as "<module>.<Kind>" (for example "store.AlreadyExists").
enum class ErrorCode {
  // core
  NotFound,
  StructuralError,
  // synthfleet
  ParamError,
  ZeroDistance,
  // ingest
  ProtocolError,
  ConnectionError,
  ReplayAborted,
  // store
  AlreadyExists,
  IoError,
  CorruptTrip,
  // features
  BadSplit,
  CorruptDataset,
  // models
  FitError,
  InputError,
  ConfigError,
  EvalError,
  ArtifactError,
  // agingwatch
  BaselineError,
  AssessError,
  // cli / pipeline
  UsageError,
};

std::string_view error_module(ErrorCode code) noexcept;
std::string_view error_name(ErrorCode code) noexcept;

/// "<module>.<Kind>"
std::string qualified_error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace evfleet

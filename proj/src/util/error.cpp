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

namespace evfleet {

std::string_view error_module(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound:
    case ErrorCode::StructuralError:
      return "core";
    case ErrorCode::ParamError:
    case ErrorCode::ZeroDistance:
      return "synthfleet";
    case ErrorCode::ProtocolError:
    case ErrorCode::ConnectionError:
    case ErrorCode::ReplayAborted:
      return "ingest";
    case ErrorCode::AlreadyExists:
    case ErrorCode::IoError:
    case ErrorCode::CorruptTrip:
      return "store";
    case ErrorCode::BadSplit:
    case ErrorCode::CorruptDataset:
      return "features";
    case ErrorCode::FitError:
    case ErrorCode::InputError:
    case ErrorCode::ConfigError:
    case ErrorCode::EvalError:
    case ErrorCode::ArtifactError:
      return "models";
    case ErrorCode::BaselineError:
    case ErrorCode::AssessError:
      return "agingwatch";
    case ErrorCode::UsageError:
      return "cli";
  }
  return "unknown";
}

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::StructuralError: return "StructuralError";
    case ErrorCode::ParamError: return "ParamError";
    case ErrorCode::ZeroDistance: return "ZeroDistance";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::ConnectionError: return "ConnectionError";
    case ErrorCode::ReplayAborted: return "ReplayAborted";
    case ErrorCode::AlreadyExists: return "AlreadyExists";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::CorruptTrip: return "CorruptTrip";
    case ErrorCode::BadSplit: return "BadSplit";
    case ErrorCode::CorruptDataset: return "CorruptDataset";
    case ErrorCode::FitError: return "FitError";
    case ErrorCode::InputError: return "InputError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::EvalError: return "EvalError";
    case ErrorCode::ArtifactError: return "ArtifactError";
    case ErrorCode::BaselineError: return "BaselineError";
    case ErrorCode::AssessError: return "AssessError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

std::string qualified_error_name(ErrorCode code) {
  std::string out{error_module(code)};
  out += '.';
  out += error_name(code);
  return out;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(qualified_error_name(code) + ": " + message), code_(code) {}

}  // namespace evfleet

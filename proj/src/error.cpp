// Copyright 2026 the ecoprof authors
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

#include "ecoprof/error.hpp"

namespace ecoprof {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidParameter: return "invalid-parameter";
        case ErrorCode::kInvalidSpec: return "invalid-spec";
        case ErrorCode::kInsufficientData: return "insufficient-data";
        case ErrorCode::kMalformedTrace: return "malformed-trace";
        case ErrorCode::kUndefinedEss: return "undefined-ess";
        case ErrorCode::kUnknownRegion: return "unknown-region";
        case ErrorCode::kIo: return "io-error";
        case ErrorCode::kParse: return "parse-error";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace ecoprof

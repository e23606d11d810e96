// Copyright 2026 The qbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbench/core/error.h"

namespace qbench {

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::Reference:
        case ErrorCode::NotFound:
            return 3;
        case ErrorCode::InsufficientData:
            return 4;
        default:
            return 2;
    }
}

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Validation:
            return "validation";
        case ErrorCode::Normalization:
            return "normalization";
        case ErrorCode::Dimension:
            return "dimension";
        case ErrorCode::Registry:
            return "registry";
        case ErrorCode::ImpossibleOutcome:
            return "impossible_outcome";
        case ErrorCode::Parse:
            return "parse";
        case ErrorCode::Version:
            return "version";
        case ErrorCode::Reference:
            return "reference";
        case ErrorCode::NotFound:
            return "not_found";
        case ErrorCode::InsufficientData:
            return "insufficient_data";
        case ErrorCode::DanglingPath:
            return "dangling_path";
        case ErrorCode::Configuration:
            return "configuration";
    }
    return "unknown";
}

}  // namespace qbench

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

#ifndef QBENCH_CORE_ERROR_H
#define QBENCH_CORE_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace qbench {

/// Failure categories. Each maps onto one process exit code and one
/// machine-readable service error code.
enum class ErrorCode {
    Validation,        // malformed input, broken invariant, bad parameter
    Normalization,     // state not normalized
    Dimension,         // mode registry / matrix size mismatch
    Registry,          // missing or colliding modes
    ImpossibleOutcome, // post-selection on a zero-probability pattern
    Parse,             // document syntax
    Version,           // unsupported schema_version
    Reference,         // names a component/param/session that does not exist
    NotFound,          // unknown session id
    InsufficientData,  // empty counts
    DanglingPath,      // photon routed to an unterminated port
    Configuration,     // consistent input that yields no usable result
};

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message) : std::runtime_error(message), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

/// Process exit code: 2 validation, 3 reference, 4 insufficient data.
int exit_code(ErrorCode code);

/// Stable lowercase identifier, e.g. "validation", "not_found".
std::string_view error_code_name(ErrorCode code);

}  // namespace qbench

#endif

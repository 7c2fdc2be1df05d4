// Copyright 2026 qecplan Contributors
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

#ifndef QECPLAN_ERRORS_H
#define QECPLAN_ERRORS_H

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qecplan {

enum class ErrorCode {
    // calibration ingest
    MissingColumn,
    MalformedRow,
    DuplicateQubit,
    EmptySeries,
    DuplicateDate,
    // surface layout / decoding
    InvalidDistance,
    IndexOutOfRange,
    NonTrivialSyndrome,
    TooManyDefects,
    InvalidProbability,
    // logical model
    NonPositiveP,
    InsufficientData,
    DegenerateDesign,
    EmptyTable,
    Unsupported,
    // planner
    EmptySnapshot,
    MissingDistance,
    NoUsableQubits,
};

std::string_view error_code_name(ErrorCode code);

/// Every recoverable failure in the library is reported as a QecError. `row()`
/// is the 1-based line number for parse failures and 0 otherwise.
class QecError : public std::runtime_error {
   public:
    QecError(ErrorCode code, const std::string &message, std::size_t row = 0);

    ErrorCode code() const noexcept {
        return code_;
    }
    std::size_t row() const noexcept {
        return row_;
    }

   private:
    ErrorCode code_;
    std::size_t row_;
};

}  // namespace qecplan

#endif

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

#include "qecplan/errors.h"

namespace qecplan {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingColumn:
            return "MissingColumn";
        case ErrorCode::MalformedRow:
            return "MalformedRow";
        case ErrorCode::DuplicateQubit:
            return "DuplicateQubit";
        case ErrorCode::EmptySeries:
            return "EmptySeries";
        case ErrorCode::DuplicateDate:
            return "DuplicateDate";
        case ErrorCode::InvalidDistance:
            return "InvalidDistance";
        case ErrorCode::IndexOutOfRange:
            return "IndexOutOfRange";
        case ErrorCode::NonTrivialSyndrome:
            return "NonTrivialSyndrome";
        case ErrorCode::TooManyDefects:
            return "TooManyDefects";
        case ErrorCode::InvalidProbability:
            return "InvalidProbability";
        case ErrorCode::NonPositiveP:
            return "NonPositiveP";
        case ErrorCode::InsufficientData:
            return "InsufficientData";
        case ErrorCode::DegenerateDesign:
            return "DegenerateDesign";
        case ErrorCode::EmptyTable:
            return "EmptyTable";
        case ErrorCode::Unsupported:
            return "Unsupported";
        case ErrorCode::EmptySnapshot:
            return "EmptySnapshot";
        case ErrorCode::MissingDistance:
            return "MissingDistance";
        case ErrorCode::NoUsableQubits:
            return "NoUsableQubits";
    }
    return "Unknown";
}

static std::string format_message(ErrorCode code, const std::string &message, std::size_t row) {
    std::string out(error_code_name(code));
    if (row != 0) {
        out += " (row " + std::to_string(row) + ")";
    }
    out += ": ";
    out += message;
    return out;
}

QecError::QecError(ErrorCode code, const std::string &message, std::size_t row)
    : std::runtime_error(format_message(code, message, row)), code_(code), row_(row) {
}

}  // namespace qecplan

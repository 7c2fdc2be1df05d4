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

#ifndef QECPLAN_TEXT_UTIL_H
#define QECPLAN_TEXT_UTIL_H

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qecplan {

std::string_view trim(std::string_view s);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Whole-string numeric parses; surrounding whitespace is allowed.
std::optional<double> parse_double(std::string_view s);
std::optional<std::size_t> parse_index(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

/// Lines of `text` without their terminators. Trailing '\r' is stripped.
std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace qecplan

#endif

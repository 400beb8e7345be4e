// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef INML_TEXT_UTIL_H_
#define INML_TEXT_UTIL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace inml {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Whole-token parses; false on trailing garbage, overflow or empty input.
bool parse_double(std::string_view text, double &out);
bool parse_int64(std::string_view text, std::int64_t &out);

std::vector<std::string_view> split_whitespace(std::string_view line);
std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

}  // namespace inml

#endif  // INML_TEXT_UTIL_H_

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

namespace dyngeo {

using Json = nlohmann::json;

// Reals are written with nine digits after the decimal point, trailing
// zeros trimmed ("0.333333333", "4", "-2.5"); negative zero prints as "0".
std::string format_real(double value);

// Compact JSON with object keys in sorted order and reals through
// format_real. Equal values always produce equal bytes.
std::string canonical_dump(const Json& value);

// Wraps Json::parse, turning parse failures into SyntaxError.
Json parse_json(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace dyngeo

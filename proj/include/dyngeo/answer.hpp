// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dyngeo/canonical_json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace dyngeo {

enum class AnswerType { Numerical, Ratio, Descriptor };

std::string_view to_string(AnswerType type);           // "Numerical", ...
std::string_view json_name(AnswerType type);           // "numerical", ...
std::optional<AnswerType> answer_type_from_json_name(std::string_view name);

struct Numerical {
    double value = 0.0;
    std::string unit;  // empty means dimensionless or unspecified

    friend bool operator==(const Numerical&, const Numerical&) = default;
};

// Always in lowest terms with both parts positive; build through make().
class Ratio {
public:
    static Ratio make(std::int64_t numerator, std::int64_t denominator);
    // Accepts "a:b" and "a/b" with positive integers.
    static std::optional<Ratio> parse(std::string_view text);

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }
    std::string to_string(char separator = ':') const;

    friend bool operator==(const Ratio&, const Ratio&) = default;

private:
    Ratio(std::int64_t n, std::int64_t d) : num_(n), den_(d) {}
    std::int64_t num_;
    std::int64_t den_;
};

struct Descriptor {
    std::string text;

    friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

using AnswerValue = std::variant<Numerical, Ratio, Descriptor>;

AnswerType type_of(const AnswerValue& value);

// {"type":"numerical","value":30,"unit":"degree"} and friends.
Json answer_to_json(const AnswerValue& value);
// Strict inverse of answer_to_json; throws SchemaError.
AnswerValue answer_from_json(const Json& j);
// Interprets a gold answer written as a bare JSON value (30, "30", "2:1",
// "isosceles") under a known type. Throws SchemaError.
AnswerValue parse_gold_answer(AnswerType type, const Json& value, std::string unit = {});

std::string describe(const AnswerValue& value);

// Lower-case, trim, collapse interior whitespace.
std::string normalize_descriptor(std::string_view text);

// Converts a numerical answer into degrees / plain units. Returns nullopt
// for an unknown unit.
std::optional<double> normalized_value(const Numerical& n, bool& is_angle);

}  // namespace dyngeo

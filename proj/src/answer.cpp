// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/answer.hpp"

#include "dyngeo/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

namespace dyngeo {

std::string_view to_string(AnswerType type) {
    switch (type) {
    case AnswerType::Numerical: return "Numerical";
    case AnswerType::Ratio: return "Ratio";
    case AnswerType::Descriptor: return "Descriptor";
    }
    return "?";
}

std::string_view json_name(AnswerType type) {
    switch (type) {
    case AnswerType::Numerical: return "numerical";
    case AnswerType::Ratio: return "ratio";
    case AnswerType::Descriptor: return "descriptor";
    }
    return "?";
}

std::optional<AnswerType> answer_type_from_json_name(std::string_view name) {
    if (name == "numerical") return AnswerType::Numerical;
    if (name == "ratio") return AnswerType::Ratio;
    if (name == "descriptor") return AnswerType::Descriptor;
    return std::nullopt;
}

Ratio Ratio::make(std::int64_t numerator, std::int64_t denominator) {
    if (numerator <= 0 || denominator <= 0) throw SchemaError("ratio parts must be positive integers");
    auto g = std::gcd(numerator, denominator);
    return Ratio(numerator / g, denominator / g);
}

namespace {

std::optional<std::int64_t> parse_positive(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v <= 0) return std::nullopt;
    return v;
}

}  // namespace

std::optional<Ratio> Ratio::parse(std::string_view text) {
    auto sep = text.find_first_of(":/");
    if (sep == std::string_view::npos) return std::nullopt;
    auto a = parse_positive(text.substr(0, sep));
    auto b = parse_positive(text.substr(sep + 1));
    if (!a || !b) return std::nullopt;
    return make(*a, *b);
}

std::string Ratio::to_string(char separator) const {
    return std::to_string(num_) + separator + std::to_string(den_);
}

AnswerType type_of(const AnswerValue& value) {
    return static_cast<AnswerType>(value.index());
}

Json answer_to_json(const AnswerValue& value) {
    Json j;
    j["type"] = std::string(json_name(type_of(value)));
    if (auto* n = std::get_if<Numerical>(&value)) {
        j["value"] = n->value;
        if (!n->unit.empty()) j["unit"] = n->unit;
    } else if (auto* r = std::get_if<Ratio>(&value)) {
        j["value"] = r->to_string();
    } else {
        j["value"] = std::get<Descriptor>(value).text;
    }
    return j;
}

AnswerValue answer_from_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("answer must be an object");
    for (const auto& [key, _] : j.items()) {
        if (key != "type" && key != "value" && key != "unit") throw SchemaError("unknown answer key '" + key + "'");
    }
    if (!j.contains("type") || !j["type"].is_string()) throw SchemaError("answer needs a string 'type'");
    auto type = answer_type_from_json_name(j["type"].get<std::string>());
    if (!type) throw SchemaError("unknown answer type '" + j["type"].get<std::string>() + "'");
    if (!j.contains("value")) throw SchemaError("answer needs a 'value'");
    const Json& v = j["value"];
    if (j.contains("unit") && (*type != AnswerType::Numerical || !j["unit"].is_string()))
        throw SchemaError("'unit' is only allowed as a string on numerical answers");

    switch (*type) {
    case AnswerType::Numerical: {
        if (!v.is_number()) throw SchemaError("numerical answer value must be a number");
        double x = v.get<double>();
        if (!std::isfinite(x)) throw SchemaError("numerical answer must be finite");
        return Numerical{x, j.value("unit", std::string{})};
    }
    case AnswerType::Ratio: {
        if (!v.is_string()) throw SchemaError("ratio answer value must be a string like \"2:1\"");
        auto r = Ratio::parse(v.get<std::string>());
        if (!r) throw SchemaError("malformed ratio '" + v.get<std::string>() + "'");
        return *r;
    }
    case AnswerType::Descriptor: {
        if (!v.is_string() || normalize_descriptor(v.get<std::string>()).empty())
            throw SchemaError("descriptor answer must be a nonempty string");
        return Descriptor{v.get<std::string>()};
    }
    }
    throw SchemaError("unreachable answer type");
}

AnswerValue parse_gold_answer(AnswerType type, const Json& value, std::string unit) {
    switch (type) {
    case AnswerType::Numerical: {
        double x = 0;
        if (value.is_number()) {
            x = value.get<double>();
        } else if (value.is_string()) {
            const auto s = value.get<std::string>();
            std::size_t used = 0;
            try {
                x = std::stod(s, &used);
            } catch (const std::exception&) {
                throw SchemaError("numerical gold answer '" + s + "' is not a number");
            }
            if (used != s.size()) throw SchemaError("numerical gold answer '" + s + "' has trailing text");
        } else {
            throw SchemaError("numerical gold answer must be a number or numeric string");
        }
        if (!std::isfinite(x)) throw SchemaError("numerical gold answer must be finite");
        return Numerical{x, std::move(unit)};
    }
    case AnswerType::Ratio: {
        if (!value.is_string()) throw SchemaError("ratio gold answer must be a string");
        auto r = Ratio::parse(value.get<std::string>());
        if (!r) throw SchemaError("malformed ratio '" + value.get<std::string>() + "'");
        return *r;
    }
    case AnswerType::Descriptor:
        if (!value.is_string() || normalize_descriptor(value.get<std::string>()).empty())
            throw SchemaError("descriptor gold answer must be a nonempty string");
        return Descriptor{value.get<std::string>()};
    }
    throw SchemaError("unreachable answer type");
}

std::string describe(const AnswerValue& value) {
    if (auto* n = std::get_if<Numerical>(&value)) {
        auto s = format_real(n->value);
        return n->unit.empty() ? s : s + " " + n->unit;
    }
    if (auto* r = std::get_if<Ratio>(&value)) return r->to_string();
    return std::get<Descriptor>(value).text;
}

std::string normalize_descriptor(std::string_view text) {
    std::string out;
    bool pending_space = false;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out += ' ';
        pending_space = false;
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}

std::optional<double> normalized_value(const Numerical& n, bool& is_angle) {
    std::string unit = normalize_descriptor(n.unit);
    is_angle = false;
    if (unit.empty() || unit == "unit" || unit == "units") return n.value;
    if (unit == "deg" || unit == "degree" || unit == "degrees" || unit == "\xC2\xB0") {
        is_angle = true;
        return n.value;
    }
    if (unit == "rad" || unit == "radian" || unit == "radians") {
        is_angle = true;
        return n.value * 180.0 / std::numbers::pi;
    }
    return std::nullopt;
}

}  // namespace dyngeo

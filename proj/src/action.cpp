// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/action.hpp"

#include "dyngeo/errors.hpp"
#include "dyngeo/logic_form.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace dyngeo {

namespace {

void exact_keys(const Json& j, std::initializer_list<std::string_view> keys, std::initializer_list<std::string_view> optional = {}) {
    const auto op = j["op"].get<std::string>();
    for (const auto& [key, _] : j.items()) {
        bool ok = std::find(keys.begin(), keys.end(), key) != keys.end() ||
                  std::find(optional.begin(), optional.end(), key) != optional.end();
        if (!ok) throw ActionSchemaError(op + ": unexpected field '" + key + "'");
    }
    for (auto key : keys)
        if (!j.contains(std::string(key))) throw ActionSchemaError(op + ": missing field '" + std::string(key) + "'");
}

std::string label(const Json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_string() || v.get<std::string>().empty())
        throw ActionSchemaError(std::string("'") + key + "' must be a nonempty string");
    return v.get<std::string>();
}

double real(const Json& v, const char* what) {
    if (!v.is_number()) throw ActionSchemaError(std::string("'") + what + "' must be a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw ActionSchemaError(std::string("'") + what + "' must be finite");
    return x;
}

Vec2 pair(const Json& v, const char* what) {
    if (!v.is_array() || v.size() != 2) throw ActionSchemaError(std::string("'") + what + "' must be a [x, y] pair");
    return {real(v[0], what), real(v[1], what)};
}

}  // namespace

Action action_from_json(const Json& j) {
    if (!j.is_object()) throw ActionSchemaError("action must be a JSON object");
    if (!j.contains("op") || !j["op"].is_string()) throw ActionSchemaError("action needs a string 'op'");
    const auto op = j["op"].get<std::string>();

    if (op == "draw_line") {
        exact_keys(j, {"op", "from", "to"});
        return DrawLine{label(j, "from"), label(j, "to")};
    }
    if (op == "reflect") {
        exact_keys(j, {"op", "object", "axis"});
        const auto& axis = j["axis"];
        if (!axis.is_array() || axis.size() != 2 || !axis[0].is_string() || !axis[1].is_string())
            throw ActionSchemaError("'axis' must be a pair of point labels");
        return Reflect{label(j, "object"), {axis[0].get<std::string>(), axis[1].get<std::string>()}};
    }
    if (op == "rotate") {
        exact_keys(j, {"op", "object", "center", "degrees"});
        return Rotate{label(j, "object"), label(j, "center"), real(j["degrees"], "degrees")};
    }
    if (op == "translate") {
        exact_keys(j, {"op", "object", "vector"});
        return Translate{label(j, "object"), pair(j["vector"], "vector")};
    }
    if (op == "label_point") {
        exact_keys(j, {"op", "name", "coordinates"});
        auto name = label(j, "name");
        if (!is_valid_label(name)) throw ActionSchemaError("'" + name + "' is not a valid point name");
        return LabelPoint{std::move(name), pair(j["coordinates"], "coordinates")};
    }
    if (op == "answer") {
        exact_keys(j, {"op", "type", "value"}, {"unit"});
        Json body = j;
        body.erase("op");
        try {
            return Answer{answer_from_json(body)};
        } catch (const SchemaError& e) {
            throw ActionSchemaError(std::string("answer: ") + e.what());
        }
    }
    throw ActionSchemaError("unknown op '" + op + "'");
}

Action parse_action(std::string_view text) {
    Json j;
    try {
        j = parse_json(text);
    } catch (const SyntaxError& e) {
        throw ActionSchemaError(std::string("action is not valid JSON: ") + e.what());
    }
    return action_from_json(j);
}

Json action_to_json(const Action& a) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, DrawLine>) {
                return Json{{"op", "draw_line"}, {"from", v.from}, {"to", v.to}};
            } else if constexpr (std::is_same_v<T, Reflect>) {
                return Json{{"op", "reflect"}, {"object", v.object}, {"axis", Json::array({v.axis[0], v.axis[1]})}};
            } else if constexpr (std::is_same_v<T, Rotate>) {
                return Json{{"op", "rotate"}, {"object", v.object}, {"center", v.center}, {"degrees", v.degrees}};
            } else if constexpr (std::is_same_v<T, Translate>) {
                return Json{{"op", "translate"}, {"object", v.object}, {"vector", Json::array({v.vector.x, v.vector.y})}};
            } else if constexpr (std::is_same_v<T, LabelPoint>) {
                return Json{{"op", "label_point"}, {"name", v.name},
                            {"coordinates", Json::array({v.coordinates.x, v.coordinates.y})}};
            } else {
                Json j = answer_to_json(v.value);
                j["op"] = "answer";
                return j;
            }
        },
        a);
}

std::string serialize_action(const Action& a) { return canonical_dump(action_to_json(a)); }

std::string_view op_name(const Action& a) {
    static constexpr std::string_view names[] = {"draw_line", "reflect", "rotate", "translate", "label_point", "answer"};
    return names[a.index()];
}

bool is_terminal(const Action& a) { return std::holds_alternative<Answer>(a); }

}  // namespace dyngeo

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dyngeo/answer.hpp"
#include "dyngeo/canonical_json.hpp"
#include "dyngeo/geom.hpp"

#include <array>
#include <string>
#include <string_view>
#include <variant>

namespace dyngeo {

struct DrawLine {
    std::string from;
    std::string to;
    friend bool operator==(const DrawLine&, const DrawLine&) = default;
};

struct Reflect {
    std::string object;
    std::array<std::string, 2> axis;
    friend bool operator==(const Reflect&, const Reflect&) = default;
};

struct Rotate {
    std::string object;
    std::string center;
    double degrees = 0.0;  // counter-clockwise positive
    friend bool operator==(const Rotate&, const Rotate&) = default;
};

struct Translate {
    std::string object;
    Vec2 vector;
    friend bool operator==(const Translate&, const Translate&) = default;
};

struct LabelPoint {
    std::string name;
    Vec2 coordinates;
    friend bool operator==(const LabelPoint&, const LabelPoint&) = default;
};

struct Answer {
    AnswerValue value;
    friend bool operator==(const Answer&, const Answer&) = default;
};

using Action = std::variant<DrawLine, Reflect, Rotate, Translate, LabelPoint, Answer>;

// Action wire format, every field required and no extra keys:
//   {"op":"draw_line","from":"A","to":"B"}
//   {"op":"reflect","object":"triangle_ABC","axis":["P","Q"]}
//   {"op":"rotate","object":"triangle_ABC","center":"B","degrees":90}
//   {"op":"translate","object":"line_AB","vector":[2,-1]}
//   {"op":"label_point","name":"M","coordinates":[1.5,0]}
//   {"op":"answer","type":"numerical","value":30}   (+ optional "unit")
//   {"op":"answer","type":"ratio","value":"2:1"}
//   {"op":"answer","type":"descriptor","value":"isosceles"}
// Any deviation throws ActionSchemaError.
Action parse_action(std::string_view text);
Action action_from_json(const Json& j);
Json action_to_json(const Action& a);
std::string serialize_action(const Action& a);

std::string_view op_name(const Action& a);
bool is_terminal(const Action& a);

}  // namespace dyngeo

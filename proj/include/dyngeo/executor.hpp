// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dyngeo/action.hpp"
#include "dyngeo/logic_form.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dyngeo {

// LabelPoint snaps to existing points, object intersections and segment
// midpoints closer than this.
inline constexpr double kSnapEps = 1e-6;

struct ExecutionResult {
    LogicForm next_form;
    std::vector<std::string> created;  // new point labels and object refs
    bool terminal = false;
    std::optional<AnswerValue> answer;
};

/// Applies one action to a form, returning the successor; the input is never
/// modified.
///
/// - draw_line adds an auxiliary line (a no-op if the line already exists)
///   and records point_on_line/midpoint relations for labeled points that
///   fall inside the new segment.
/// - reflect/rotate/translate add a transformed copy of the object. Points
///   the map fixes by construction (the rotation center, the axis points)
///   keep their label; every other image gets a fresh primed label
///   (A -> A', or A'' if A' is taken). The original object stays.
/// - label_point adds a named point, snapped as described above, together
///   with the incidence relations it satisfies.
/// - answer marks the result terminal.
///
/// Throws UnknownLabel, UnknownObject, NameCollision, DegenerateAxis or
/// DegenerateLine.
ExecutionResult execute(const LogicForm& lf, const Action& action);

struct IntersectionCandidate {
    Vec2 point;
    std::string object;  // the object being intersected
    std::string other;   // the prior object it meets
};

/// Unnamed crossings of `object_ref` with every other object, segment
/// semantics, excluding spots already occupied by a labeled point.
/// Sorted by (x, y); coincident crossings are reported once.
std::vector<IntersectionCandidate> auto_intersections(const LogicForm& lf, std::string_view object_ref);

// Straight pieces of an object: the segment of a line, the edges of a polygon.
struct LabeledSegment {
    std::string a;
    std::string b;
    Segment seg;
};
std::vector<LabeledSegment> object_segments(const LogicForm& lf, const ObjectDecl& obj);

}  // namespace dyngeo

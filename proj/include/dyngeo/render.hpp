// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dyngeo/logic_form.hpp"

#include <string>
#include <vector>

namespace dyngeo {

struct RenderStyle {
    double canvas_width = 640.0;  // px; height follows the aspect ratio
    double stroke_width = 2.0;
    double point_radius = 3.0;
    double font_size = 14.0;
    double margin = 0.1;  // fraction of the bounding box added on each side
    std::string dash = "6,4";
};

// Model-space box; min == max for a single point.
struct BoundingBox {
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

// Points plus the extent of every circle. Throws EmptyForm.
BoundingBox bounding_box(const LogicForm& lf);

/// SVG 1.1 document. Model +y points up. Elements come in a fixed order:
/// objects (circles, lines, polygons; by labels within a kind), then points
/// by name, then their text labels. Ids are "obj-<kind>-<labels>",
/// "pt-<label>" and "lbl-<label>". Objects created by actions are dashed.
/// Throws EmptyForm when the form has no points.
std::string render_svg(const LogicForm& lf, const RenderStyle& style = {});

// Same, framed by an explicit model-space box.
std::string render_svg(const LogicForm& lf, const RenderStyle& style, const BoundingBox& box);

// One document per frame, all framed by the union of the frames' boxes.
std::vector<std::string> render_trajectory(const std::vector<LogicForm>& frames, const RenderStyle& style = {});

}  // namespace dyngeo

// SPDX-License-Identifier: Apache-2.0
// Shared fixtures and independent oracles for the test binaries.
#pragma once

#include "dyngeo/logic_form.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace testing {

using dyngeo::LogicForm;
using dyngeo::Vec2;

inline std::string data_path(const std::string& name) { return std::string(DYNGEO_TEST_DATA) + "/" + name; }

inline LogicForm form(const std::string& json) { return dyngeo::parse_logic_form(json); }

// Unit square ABCD, counter-clockwise from the origin, drawn as a polygon.
inline LogicForm square_form() {
    return form(R"({"points":[{"name":"A","x":0,"y":0},{"name":"B","x":1,"y":0},
        {"name":"C","x":1,"y":1},{"name":"D","x":0,"y":1}],
        "objects":[{"type":"polygon","points":["A","B","C","D"]}],"relations":[]})");
}

// Plain textbook formulas, written without the library's kernels.
namespace oracle {

inline double dist(double ax, double ay, double bx, double by) { return std::sqrt((bx - ax) * (bx - ax) + (by - ay) * (by - ay)); }

inline double angle_deg(Vec2 a, Vec2 v, Vec2 b) {
    double ux = a.x - v.x, uy = a.y - v.y, wx = b.x - v.x, wy = b.y - v.y;
    double c = (ux * wx + uy * wy) / (std::sqrt(ux * ux + uy * uy) * std::sqrt(wx * wx + wy * wy));
    c = std::fmax(-1.0, std::fmin(1.0, c));
    return std::acos(c) * 180.0 / M_PI;
}

inline Vec2 at(const LogicForm& lf, const std::string& name) {
    for (const auto& p : lf.points)
        if (p.name == name) return {p.x, p.y};
    return {NAN, NAN};
}

// Squared-residual sum recomputed from the relation list.
inline double total_error(const LogicForm& lf) {
    double e = 0.0;
    auto sq = [&](double r) { e += r * r; };
    for (const auto& r : lf.relations) {
        std::vector<Vec2> p;
        for (const auto& a : r.args) p.push_back(at(lf, a));
        auto unit = [](Vec2 a, Vec2 b) {
            double l = dist(a.x, a.y, b.x, b.y);
            return Vec2{(b.x - a.x) / l, (b.y - a.y) / l};
        };
        switch (r.kind) {
        case dyngeo::RelationKind::PointOnLine: {
            Vec2 u = unit(p[1], p[2]);
            sq(u.x * (p[0].y - p[1].y) - u.y * (p[0].x - p[1].x));
            break;
        }
        case dyngeo::RelationKind::PointOnCircle: {
            double radius = 0.0;
            for (const auto& o : lf.objects)
                if (o.kind == dyngeo::ObjectKind::Circle && o.points[0] == r.args[1]) radius = o.radius;
            sq(dist(p[0].x, p[0].y, p[1].x, p[1].y) - radius);
            break;
        }
        case dyngeo::RelationKind::Perpendicular: {
            Vec2 u = unit(p[0], p[1]), w = unit(p[2], p[3]);
            sq(u.x * w.x + u.y * w.y);
            break;
        }
        case dyngeo::RelationKind::Parallel: {
            Vec2 u = unit(p[0], p[1]), w = unit(p[2], p[3]);
            sq(u.x * w.y - u.y * w.x);
            break;
        }
        case dyngeo::RelationKind::EqualLength: {
            double a = dist(p[0].x, p[0].y, p[1].x, p[1].y), b = dist(p[2].x, p[2].y, p[3].x, p[3].y);
            sq(a * a - b * b);
            break;
        }
        case dyngeo::RelationKind::FixedLength: sq(dist(p[0].x, p[0].y, p[1].x, p[1].y) - *r.value); break;
        case dyngeo::RelationKind::FixedAngle: sq(angle_deg(p[0], p[1], p[2]) - *r.value); break;
        case dyngeo::RelationKind::Collinear:
            sq((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[1].y - p[0].y) * (p[2].x - p[0].x));
            break;
        case dyngeo::RelationKind::Midpoint:
            sq(2 * p[0].x - p[1].x - p[2].x);
            sq(2 * p[0].y - p[1].y - p[2].y);
            break;
        }
    }
    return e;
}

}  // namespace oracle
}  // namespace testing

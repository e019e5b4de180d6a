// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace dyngeo {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(b - a); }
inline bool is_finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

// x' = a*x + b*y + tx
// y' = c*x + d*y + ty
struct AffineMap {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
    double tx = 0.0, ty = 0.0;

    double determinant() const { return a * d - b * c; }
    friend constexpr bool operator==(const AffineMap&, const AffineMap&) = default;
};

inline constexpr double kDegenerateSeparation = 1e-12;
inline constexpr double kParallelAngleTol = 1e-10;  // radians
inline constexpr double kIntersectionTol = 1e-9;

// Counter-clockwise rotation about center; negative degrees turn clockwise.
AffineMap rotation_map(Vec2 center, double degrees);
// Reflection across the infinite line through p and q. Throws DegenerateAxis.
AffineMap reflection_map(Vec2 p, Vec2 q);
AffineMap translation_map(Vec2 v);

Vec2 apply_map(const AffineMap& m, Vec2 p);
// compose(outer, inner) applies inner first.
AffineMap compose(const AffineMap& outer, const AffineMap& inner);
// Largest coefficient difference; used for identity checks in tests.
double max_abs_difference(const AffineMap& lhs, const AffineMap& rhs);

struct Segment {
    Vec2 p;
    Vec2 q;
};

struct Circle {
    Vec2 center;
    double radius = 0.0;
};

// Intersection of the infinite carriers. t and u are the parameters along
// the first and second segment (0 at p, 1 at q).
struct LineHit {
    Vec2 point;
    double t = 0.0;
    double u = 0.0;
    bool within_both = false;
};

std::optional<LineHit> intersect_lines(const Segment& l1, const Segment& l2);

struct CircleHit {
    Vec2 point;
    double t = 0.0;  // parameter along the line
    bool within_segment = false;
};

// Hits are ordered by t; a tangent line yields a single hit.
std::vector<CircleHit> intersect_line_circle(const Segment& line, const Circle& circle);

// 0..2 points; concentric or separated circles give none, tangency one.
std::vector<Vec2> intersect_circles(const Circle& c1, const Circle& c2);

// Unsigned angle a-vertex-b in degrees, in [0, 180]. Throws DegenerateAngle.
double angle_measure(Vec2 a, Vec2 vertex, Vec2 b);

// Signed distance of p from the carrier of s (positive on the left of p->q).
double signed_distance(const Segment& s, Vec2 p);

}  // namespace dyngeo

// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/geom.hpp"

#include "dyngeo/errors.hpp"

#include <algorithm>
#include <numbers>

namespace dyngeo {

namespace {

// Quarter turns get exact coefficients so that rotating a lattice point
// lands on a lattice point.
void exact_sin_cos(double degrees, double& s, double& c) {
    double turns = std::fmod(degrees, 360.0);
    if (turns < 0) turns += 360.0;
    if (turns == 0.0) { s = 0.0; c = 1.0; return; }
    if (turns == 90.0) { s = 1.0; c = 0.0; return; }
    if (turns == 180.0) { s = 0.0; c = -1.0; return; }
    if (turns == 270.0) { s = -1.0; c = 0.0; return; }
    double rad = degrees * std::numbers::pi / 180.0;
    s = std::sin(rad);
    c = std::cos(rad);
}

}  // namespace

AffineMap rotation_map(Vec2 center, double degrees) {
    double s = 0, c = 1;
    exact_sin_cos(degrees, s, c);
    AffineMap m{c, -s, s, c, 0.0, 0.0};
    // Fix the center: t = center - R*center.
    m.tx = center.x - (c * center.x - s * center.y);
    m.ty = center.y - (s * center.x + c * center.y);
    return m;
}

AffineMap reflection_map(Vec2 p, Vec2 q) {
    Vec2 dir = q - p;
    double len = norm(dir);
    if (!(len > kDegenerateSeparation)) throw DegenerateAxis();
    double ux = dir.x / len, uy = dir.y / len;
    // Householder-style reflection about the direction u: 2uu^T - I.
    AffineMap m{2 * ux * ux - 1, 2 * ux * uy, 2 * ux * uy, 2 * uy * uy - 1, 0.0, 0.0};
    m.tx = p.x - (m.a * p.x + m.b * p.y);
    m.ty = p.y - (m.c * p.x + m.d * p.y);
    return m;
}

AffineMap translation_map(Vec2 v) { return AffineMap{1.0, 0.0, 0.0, 1.0, v.x, v.y}; }

Vec2 apply_map(const AffineMap& m, Vec2 p) {
    return {m.a * p.x + m.b * p.y + m.tx, m.c * p.x + m.d * p.y + m.ty};
}

AffineMap compose(const AffineMap& o, const AffineMap& i) {
    return AffineMap{
        o.a * i.a + o.b * i.c,
        o.a * i.b + o.b * i.d,
        o.c * i.a + o.d * i.c,
        o.c * i.b + o.d * i.d,
        o.a * i.tx + o.b * i.ty + o.tx,
        o.c * i.tx + o.d * i.ty + o.ty,
    };
}

double max_abs_difference(const AffineMap& l, const AffineMap& r) {
    return std::max({std::abs(l.a - r.a), std::abs(l.b - r.b), std::abs(l.c - r.c),
                     std::abs(l.d - r.d), std::abs(l.tx - r.tx), std::abs(l.ty - r.ty)});
}

std::optional<LineHit> intersect_lines(const Segment& l1, const Segment& l2) {
    Vec2 d1 = l1.q - l1.p;
    Vec2 d2 = l2.q - l2.p;
    double n1 = norm(d1), n2 = norm(d2);
    if (!(n1 > kDegenerateSeparation) || !(n2 > kDegenerateSeparation)) throw DegenerateLine();

    double den = cross(d1, d2);
    if (std::abs(den) <= n1 * n2 * std::sin(kParallelAngleTol)) return std::nullopt;

    Vec2 w = l2.p - l1.p;
    LineHit hit;
    hit.t = cross(w, d2) / den;
    hit.u = cross(w, d1) / den;
    hit.point = l1.p + hit.t * d1;
    double tt = kIntersectionTol / n1, tu = kIntersectionTol / n2;
    hit.within_both = hit.t >= -tt && hit.t <= 1 + tt && hit.u >= -tu && hit.u <= 1 + tu;
    return hit;
}

std::vector<CircleHit> intersect_line_circle(const Segment& line, const Circle& circle) {
    Vec2 d = line.q - line.p;
    double len = norm(d);
    if (!(len > kDegenerateSeparation)) throw DegenerateLine();

    Vec2 unit = (1.0 / len) * d;
    double t0 = dot(circle.center - line.p, unit);  // arc length to the foot
    Vec2 foot = line.p + t0 * unit;
    double h = distance(foot, circle.center);

    std::vector<CircleHit> hits;
    auto push = [&](double s) {
        CircleHit hit;
        hit.point = line.p + s * unit;
        hit.t = s / len;
        hit.within_segment = s >= -kIntersectionTol && s <= len + kIntersectionTol;
        hits.push_back(hit);
    };
    if (h > circle.radius + kIntersectionTol) return hits;
    double half = h >= circle.radius ? 0.0 : std::sqrt(circle.radius * circle.radius - h * h);
    if (half <= 0.5 * kIntersectionTol) {
        push(t0);
    } else {
        push(t0 - half);
        push(t0 + half);
    }
    return hits;
}

std::vector<Vec2> intersect_circles(const Circle& c1, const Circle& c2) {
    std::vector<Vec2> out;
    Vec2 d = c2.center - c1.center;
    double dist = norm(d);
    if (!(dist > kDegenerateSeparation)) return out;
    if (dist > c1.radius + c2.radius + kIntersectionTol) return out;
    if (dist < std::abs(c1.radius - c2.radius) - kIntersectionTol) return out;
    // Distance from c1 along d to the chord, then half chord length.
    double along = (dist * dist + c1.radius * c1.radius - c2.radius * c2.radius) / (2 * dist);
    double h2 = c1.radius * c1.radius - along * along;
    Vec2 unit = (1.0 / dist) * d;
    Vec2 base = c1.center + along * unit;
    double h = h2 > 0 ? std::sqrt(h2) : 0.0;
    if (h <= 0.5 * kIntersectionTol) {
        out.push_back(base);
    } else {
        Vec2 perp{-unit.y, unit.x};
        out.push_back(base - h * perp);
        out.push_back(base + h * perp);
    }
    return out;
}

double angle_measure(Vec2 a, Vec2 vertex, Vec2 b) {
    Vec2 u = a - vertex, v = b - vertex;
    double nu = norm(u), nv = norm(v);
    if (!(nu > kDegenerateSeparation) || !(nv > kDegenerateSeparation)) throw DegenerateAngle();
    double cosine = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
    return std::acos(cosine) * 180.0 / std::numbers::pi;
}

double signed_distance(const Segment& s, Vec2 p) {
    Vec2 d = s.q - s.p;
    double len = norm(d);
    if (!(len > kDegenerateSeparation)) throw DegenerateLine();
    return cross(d, p - s.p) / len;
}

}  // namespace dyngeo

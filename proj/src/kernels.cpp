// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/kernels.hpp"

#include "dyngeo/errors.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dyngeo {

ConstraintSystem::ConstraintSystem(const LogicForm& lf) {
    std::map<std::string, int> index;
    for (const auto& p : lf.points) {
        index[p.name] = static_cast<int>(labels_.size());
        labels_.push_back(p.name);
        coords_.push_back(p.x);
        coords_.push_back(p.y);
    }
    std::map<std::string, double> radius;
    for (const auto& obj : lf.objects)
        if (obj.kind == ObjectKind::Circle) radius[obj.center()] = obj.radius;

    for (const auto& rel : lf.relations) {
        Compiled c;
        c.kind = rel.kind;
        c.text = rel.describe();
        for (std::size_t i = 0; i < rel.args.size() && i < 4; ++i) {
            auto it = index.find(rel.args[i]);
            if (it == index.end()) throw UnknownLabel(rel.args[i]);
            c.idx[i] = it->second;
        }
        if (rel.value) c.value = *rel.value;
        if (rel.kind == RelationKind::PointOnCircle) {
            auto it = radius.find(rel.args[1]);
            if (it == radius.end()) throw DegenerateRelation(c.text + ": no circle centered at " + rel.args[1]);
            c.radius = it->second;
        }
        relations_.push_back(std::move(c));
    }
}

std::size_t ConstraintSystem::residual_count() const {
    std::size_t n = 0;
    for (const auto& r : relations_) n += r.kind == RelationKind::Midpoint ? 2 : 1;
    return n;
}

namespace {

constexpr double kDegrees = 180.0 / std::numbers::pi;

Vec2 at(std::span<const double> c, int i) { return {c[2 * i], c[2 * i + 1]}; }

// Partial of a unit direction (B - A)/L contracted with g: (g - (g.u)u)/L.
Vec2 project_out(Vec2 g, Vec2 u, double len) { return (1.0 / len) * (g - dot(g, u) * u); }

}  // namespace

void ConstraintSystem::evaluate(const Compiled& rel, std::span<const double> c, Term& t) {
    const auto& i = rel.idx;
    auto degenerate = [&rel]() { throw DegenerateRelation(rel.text + " is degenerate at the current coordinates"); };
    t.count = 1;
    for (auto& row : t.d)
        for (auto& v : row) v = {};

    switch (rel.kind) {
    case RelationKind::PointOnLine: {
        Vec2 p = at(c, i[0]), a = at(c, i[1]), b = at(c, i[2]);
        Vec2 d = b - a, w = p - a;
        double len = norm(d);
        if (!(len > kDegenerateSeparation)) degenerate();
        double cr = cross(d, w);
        t.r[0] = cr / len;
        Vec2 dp = (1.0 / len) * Vec2{-d.y, d.x};
        Vec2 db = (1.0 / len) * Vec2{w.y, -w.x} - (cr / (len * len * len)) * d;
        t.d[0][0] = dp;
        t.d[0][2] = db;
        t.d[0][1] = -(dp + db);
        break;
    }
    case RelationKind::PointOnCircle: {
        Vec2 p = at(c, i[0]), o = at(c, i[1]);
        double len = distance(o, p);
        if (!(len > kDegenerateSeparation)) degenerate();
        Vec2 u = (1.0 / len) * (p - o);
        t.r[0] = len - rel.radius;
        t.d[0][0] = u;
        t.d[0][1] = -u;
        break;
    }
    case RelationKind::Perpendicular:
    case RelationKind::Parallel: {
        Vec2 a = at(c, i[0]), b = at(c, i[1]), cc = at(c, i[2]), dd = at(c, i[3]);
        double l1 = distance(a, b), l2 = distance(cc, dd);
        if (!(l1 > kDegenerateSeparation) || !(l2 > kDegenerateSeparation)) degenerate();
        Vec2 u1 = (1.0 / l1) * (b - a), u2 = (1.0 / l2) * (dd - cc);
        Vec2 g1, g2;
        if (rel.kind == RelationKind::Perpendicular) {
            t.r[0] = dot(u1, u2);
            g1 = u2;
            g2 = u1;
        } else {
            t.r[0] = cross(u1, u2);
            g1 = {u2.y, -u2.x};
            g2 = {-u1.y, u1.x};
        }
        Vec2 db = project_out(g1, u1, l1), ddd = project_out(g2, u2, l2);
        t.d[0][1] = db;
        t.d[0][0] = -db;
        t.d[0][3] = ddd;
        t.d[0][2] = -ddd;
        break;
    }
    case RelationKind::EqualLength: {
        Vec2 e = at(c, i[1]) - at(c, i[0]);
        Vec2 f = at(c, i[3]) - at(c, i[2]);
        t.r[0] = dot(e, e) - dot(f, f);
        t.d[0][1] = 2.0 * e;
        t.d[0][0] = -2.0 * e;
        t.d[0][3] = -2.0 * f;
        t.d[0][2] = 2.0 * f;
        break;
    }
    case RelationKind::FixedLength: {
        Vec2 e = at(c, i[1]) - at(c, i[0]);
        double len = norm(e);
        if (!(len > kDegenerateSeparation)) degenerate();
        Vec2 u = (1.0 / len) * e;
        t.r[0] = len - rel.value;
        t.d[0][1] = u;
        t.d[0][0] = -u;
        break;
    }
    case RelationKind::FixedAngle: {
        Vec2 v = at(c, i[1]);
        Vec2 a = at(c, i[0]) - v, b = at(c, i[2]) - v;
        if (!(norm(a) > kDegenerateSeparation) || !(norm(b) > kDegenerateSeparation)) degenerate();
        double cr = cross(a, b), dt = dot(a, b);
        double s = std::abs(cr), sign = cr < 0 ? -1.0 : 1.0;
        t.r[0] = std::atan2(s, dt) * kDegrees - rel.value;
        double den = s * s + dt * dt;
        Vec2 ds_da = sign * Vec2{b.y, -b.x}, ds_db = sign * Vec2{-a.y, a.x};
        Vec2 da = (kDegrees / den) * (dt * ds_da - s * b);
        Vec2 db = (kDegrees / den) * (dt * ds_db - s * a);
        t.d[0][0] = da;
        t.d[0][2] = db;
        t.d[0][1] = -(da + db);
        break;
    }
    case RelationKind::Collinear: {
        Vec2 a = at(c, i[0]);
        Vec2 f = at(c, i[1]) - a, e = at(c, i[2]) - a;
        t.r[0] = cross(f, e);
        Vec2 db{e.y, -e.x}, dc{-f.y, f.x};
        t.d[0][1] = db;
        t.d[0][2] = dc;
        t.d[0][0] = -(db + dc);
        break;
    }
    case RelationKind::Midpoint: {
        Vec2 m = at(c, i[0]), p = at(c, i[1]), q = at(c, i[2]);
        t.count = 2;
        t.r[0] = 2 * m.x - p.x - q.x;
        t.r[1] = 2 * m.y - p.y - q.y;
        t.d[0][0] = {2, 0};
        t.d[0][1] = {-1, 0};
        t.d[0][2] = {-1, 0};
        t.d[1][0] = {0, 2};
        t.d[1][1] = {0, -1};
        t.d[1][2] = {0, -1};
        break;
    }
    }
}

std::vector<double> ConstraintSystem::residuals(std::span<const double> coords) const {
    std::vector<double> out;
    out.reserve(residual_count());
    Term t;
    for (const auto& rel : relations_) {
        evaluate(rel, coords, t);
        for (int k = 0; k < t.count; ++k) out.push_back(t.r[k]);
    }
    return out;
}

namespace {

int involved_points(RelationKind kind) { return static_cast<int>(relation_arity(kind)); }

}  // namespace

double ConstraintSystem::error_serial(std::span<const double> coords, std::span<double> grad) const {
    const bool want_grad = !grad.empty();
    if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);
    double total = 0.0;
    Term t;
    for (const auto& rel : relations_) {
        evaluate(rel, coords, t);
        const int np = involved_points(rel.kind);
        for (int k = 0; k < t.count; ++k) {
            total += t.r[k] * t.r[k];
            if (!want_grad) continue;
            for (int j = 0; j < np; ++j) {
                grad[2 * rel.idx[j]] += 2.0 * t.r[k] * t.d[k][j].x;
                grad[2 * rel.idx[j] + 1] += 2.0 * t.r[k] * t.d[k][j].y;
            }
        }
    }
    return total;
}

double ConstraintSystem::error_omp(std::span<const double> coords, std::span<double> grad) const {
    const bool want_grad = !grad.empty();
    if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);
    const long n = static_cast<long>(relations_.size());
    double total = 0.0;
    std::optional<std::string> failure;

#pragma omp parallel reduction(+ : total)
    {
        std::vector<double> local(want_grad ? grad.size() : 0, 0.0);
        Term t;
#pragma omp for schedule(static)
        for (long r = 0; r < n; ++r) {
            const auto& rel = relations_[static_cast<std::size_t>(r)];
            try {
                evaluate(rel, coords, t);
            } catch (const DegenerateRelation& e) {
#pragma omp critical(dyngeo_failure)
                if (!failure) failure = e.what();
                continue;
            }
            const int np = involved_points(rel.kind);
            for (int k = 0; k < t.count; ++k) {
                total += t.r[k] * t.r[k];
                if (!want_grad) continue;
                for (int j = 0; j < np; ++j) {
                    local[2 * rel.idx[j]] += 2.0 * t.r[k] * t.d[k][j].x;
                    local[2 * rel.idx[j] + 1] += 2.0 * t.r[k] * t.d[k][j].y;
                }
            }
        }
        if (want_grad) {
#pragma omp critical(dyngeo_gradient)
            for (std::size_t k = 0; k < local.size(); ++k) grad[k] += local[k];
        }
    }
    if (failure) throw DegenerateRelation(*failure);
    return total;
}

}  // namespace dyngeo

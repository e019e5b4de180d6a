// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/executor.hpp"

#include "dyngeo/errors.hpp"

#include <algorithm>
#include <set>

namespace dyngeo {

std::vector<LabeledSegment> object_segments(const LogicForm& lf, const ObjectDecl& obj) {
    std::vector<LabeledSegment> out;
    if (obj.kind == ObjectKind::Circle) return out;
    const auto& pts = obj.points;
    const std::size_t n = pts.size();
    const std::size_t edges = obj.kind == ObjectKind::Line ? 1 : n;
    for (std::size_t i = 0; i < edges; ++i) {
        const auto& a = pts[i];
        const auto& b = pts[(i + 1) % n];
        out.push_back({a, b, {position(lf, a), position(lf, b)}});
    }
    return out;
}

namespace {

std::optional<Circle> object_circle(const LogicForm& lf, const ObjectDecl& obj) {
    if (obj.kind != ObjectKind::Circle) return std::nullopt;
    return Circle{position(lf, obj.center()), obj.radius};
}

// Every crossing point between two objects, segment semantics.
std::vector<Vec2> crossings(const LogicForm& lf, const ObjectDecl& x, const ObjectDecl& y) {
    std::vector<Vec2> out;
    auto sx = object_segments(lf, x);
    auto sy = object_segments(lf, y);
    auto cx = object_circle(lf, x);
    auto cy = object_circle(lf, y);
    for (const auto& a : sx) {
        for (const auto& b : sy) {
            auto hit = intersect_lines(a.seg, b.seg);
            if (hit && hit->within_both) out.push_back(hit->point);
        }
        if (cy)
            for (const auto& h : intersect_line_circle(a.seg, *cy))
                if (h.within_segment) out.push_back(h.point);
    }
    if (cx) {
        for (const auto& b : sy)
            for (const auto& h : intersect_line_circle(b.seg, *cx))
                if (h.within_segment) out.push_back(h.point);
        if (cy)
            for (const auto& p : intersect_circles(*cx, *cy)) out.push_back(p);
    }
    return out;
}

bool near_labeled_point(const LogicForm& lf, Vec2 p) {
    return std::any_of(lf.points.begin(), lf.points.end(),
                       [&](const PointDecl& q) { return distance(q.pos(), p) <= kSnapEps; });
}

bool has_relation(const LogicForm& lf, const RelationDecl& rel) {
    return std::find(lf.relations.begin(), lf.relations.end(), rel) != lf.relations.end();
}

void add_relation(LogicForm& lf, RelationDecl rel) {
    if (!has_relation(lf, rel)) lf.relations.push_back(std::move(rel));
}

// Incidence of point `name` with one straight piece a-b, interior only.
void record_segment_incidence(LogicForm& lf, const std::string& name, Vec2 p, const LabeledSegment& s) {
    if (name == s.a || name == s.b) return;
    double len = distance(s.seg.p, s.seg.q);
    if (!(len > kDegenerateSeparation)) return;
    if (std::abs(signed_distance(s.seg, p)) > kSnapEps) return;
    double along = dot(p - s.seg.p, s.seg.q - s.seg.p) / len;
    if (along <= kSnapEps || along >= len - kSnapEps) return;
    Vec2 mid = 0.5 * (s.seg.p + s.seg.q);
    std::string lo = std::min(s.a, s.b), hi = std::max(s.a, s.b);
    if (distance(mid, p) <= kSnapEps)
        add_relation(lf, {RelationKind::Midpoint, {name, lo, hi}, std::nullopt});
    else
        add_relation(lf, {RelationKind::PointOnLine, {name, lo, hi}, std::nullopt});
}

void record_incidences(LogicForm& lf, const std::string& name) {
    Vec2 p = position(lf, name);
    const auto objects = lf.objects;  // relations are appended while iterating
    for (const auto& obj : objects) {
        for (const auto& s : object_segments(lf, obj)) record_segment_incidence(lf, name, p, s);
        if (auto c = object_circle(lf, obj); c && obj.center() != name) {
            if (std::abs(distance(c->center, p) - c->radius) <= kSnapEps)
                add_relation(lf, {RelationKind::PointOnCircle, {name, obj.center()}, std::nullopt});
        }
    }
}

std::string fresh_label(const LogicForm& lf, const std::string& base, const std::set<std::string>& taken) {
    std::string cand = base + "'";
    while (find_point(lf, cand) || taken.count(cand)) cand += "'";
    return cand;
}

ExecutionResult run_draw_line(const LogicForm& lf, const DrawLine& a) {
    Vec2 p = position(lf, a.from);
    Vec2 q = position(lf, a.to);
    if (a.from == a.to || !(distance(p, q) > kDegenerateSeparation)) throw DegenerateLine();

    ExecutionResult result{lf, {}, false, std::nullopt};
    if (find_object(lf, "line_" + a.from + a.to)) return result;

    ObjectDecl line;
    line.kind = ObjectKind::Line;
    line.points = {a.from, a.to};
    line.origin = ObjectOrigin{OriginOp::DrawLine, {}, {}, 0.0, {}};
    auto& next = result.next_form;
    next.objects.push_back(line);
    result.created.push_back(line.ref());

    LabeledSegment piece{a.from, a.to, {p, q}};
    for (const auto& pt : lf.points) record_segment_incidence(next, pt.name, pt.pos(), piece);
    return result;
}

ExecutionResult run_transform(const LogicForm& lf, const std::string& object_ref, const AffineMap& map,
                              ObjectOrigin origin, const std::set<std::string>& fixed) {
    ObjectDecl source = resolve_object(lf, object_ref);

    ExecutionResult result{lf, {}, false, std::nullopt};
    auto& next = result.next_form;

    ObjectDecl copy;
    copy.kind = source.kind;
    copy.radius = source.radius;
    std::set<std::string> taken;
    std::vector<PointDecl> new_points;
    for (const auto& label : source.points) {
        if (fixed.count(label)) {
            copy.points.push_back(label);
            continue;
        }
        Vec2 image = apply_map(map, position(lf, label));
        std::string name = fresh_label(lf, label, taken);
        taken.insert(name);
        copy.points.push_back(name);
        new_points.push_back({name, image.x, image.y});
    }
    origin.from = source.points;
    copy.origin = std::move(origin);

    for (auto& p : new_points) {
        result.created.push_back(p.name);
        add_point(next, std::move(p));
    }
    if (!find_object(next, copy.ref())) {
        result.created.push_back(copy.ref());
        next.objects.push_back(std::move(copy));
    }
    return result;
}

std::optional<Vec2> snap_target(const LogicForm& lf, Vec2 wanted) {
    std::optional<Vec2> best;
    double best_d = kSnapEps;
    auto consider = [&](Vec2 p) {
        double d = distance(p, wanted);
        if (d <= best_d) {
            best_d = d;
            best = p;
        }
    };
    for (const auto& p : lf.points) consider(p.pos());
    for (std::size_t i = 0; i < lf.objects.size(); ++i) {
        for (const auto& s : object_segments(lf, lf.objects[i])) consider(0.5 * (s.seg.p + s.seg.q));
        for (std::size_t j = i + 1; j < lf.objects.size(); ++j)
            for (Vec2 p : crossings(lf, lf.objects[i], lf.objects[j])) consider(p);
    }
    return best;
}

ExecutionResult run_label_point(const LogicForm& lf, const LabelPoint& a) {
    if (!is_valid_label(a.name)) throw SchemaError("invalid point name '" + a.name + "'");
    ExecutionResult result{lf, {}, false, std::nullopt};
    if (const auto* existing = find_point(lf, a.name)) {
        if (distance(existing->pos(), a.coordinates) <= kSnapEps) return result;
        throw NameCollision(a.name);
    }
    Vec2 where = snap_target(lf, a.coordinates).value_or(a.coordinates);
    add_point(result.next_form, {a.name, where.x, where.y});
    record_incidences(result.next_form, a.name);
    result.created.push_back(a.name);
    return result;
}

}  // namespace

ExecutionResult execute(const LogicForm& lf, const Action& action) {
    return std::visit(
        [&](const auto& a) -> ExecutionResult {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, DrawLine>) {
                return run_draw_line(lf, a);
            } else if constexpr (std::is_same_v<T, Reflect>) {
                AffineMap m = reflection_map(position(lf, a.axis[0]), position(lf, a.axis[1]));
                ObjectOrigin o{OriginOp::Reflect, {}, {a.axis[0], a.axis[1]}, 0.0, {}};
                return run_transform(lf, a.object, m, std::move(o), {a.axis[0], a.axis[1]});
            } else if constexpr (std::is_same_v<T, Rotate>) {
                AffineMap m = rotation_map(position(lf, a.center), a.degrees);
                ObjectOrigin o{OriginOp::Rotate, {}, {a.center}, a.degrees, {}};
                return run_transform(lf, a.object, m, std::move(o), {a.center});
            } else if constexpr (std::is_same_v<T, Translate>) {
                AffineMap m = translation_map(a.vector);
                ObjectOrigin o{OriginOp::Translate, {}, {}, 0.0, a.vector};
                return run_transform(lf, a.object, m, std::move(o), {});
            } else if constexpr (std::is_same_v<T, LabelPoint>) {
                return run_label_point(lf, a);
            } else {
                return ExecutionResult{lf, {}, true, a.value};
            }
        },
        action);
}

std::vector<IntersectionCandidate> auto_intersections(const LogicForm& lf, std::string_view object_ref) {
    const ObjectDecl* target = find_object(lf, object_ref);
    if (!target) throw UnknownObject(std::string(object_ref));
    const std::string ref = target->ref();

    std::vector<IntersectionCandidate> all;
    for (const auto& other : lf.objects) {
        if (&other == target) continue;
        for (Vec2 p : crossings(lf, *target, other)) {
            if (near_labeled_point(lf, p)) continue;
            all.push_back({p, ref, other.ref()});
        }
    }
    // Prefer the smallest partner ref so the result does not depend on the
    // order objects were declared in.
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.other < y.other; });
    std::vector<IntersectionCandidate> unique;
    for (const auto& c : all) {
        bool seen = std::any_of(unique.begin(), unique.end(),
                                [&](const auto& u) { return distance(u.point, c.point) <= kSnapEps; });
        if (!seen) unique.push_back(c);
    }
    std::sort(unique.begin(), unique.end(), [](const auto& x, const auto& y) {
        if (x.point.x != y.point.x) return x.point.x < y.point.x;
        return x.point.y < y.point.y;
    });
    return unique;
}

}  // namespace dyngeo

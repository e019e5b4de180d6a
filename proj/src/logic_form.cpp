// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/logic_form.hpp"

#include "dyngeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dyngeo {

std::string_view to_string(ObjectKind kind) {
    switch (kind) {
    case ObjectKind::Line: return "line";
    case ObjectKind::Circle: return "circle";
    case ObjectKind::Polygon: return "polygon";
    }
    return "?";
}

std::string_view to_string(OriginOp op) {
    switch (op) {
    case OriginOp::DrawLine: return "draw_line";
    case OriginOp::Reflect: return "reflect";
    case OriginOp::Rotate: return "rotate";
    case OriginOp::Translate: return "translate";
    }
    return "?";
}

namespace {

struct RelationInfo {
    RelationKind kind;
    std::string_view name;
    std::size_t arity;
    bool has_value;
};

constexpr RelationInfo kRelations[] = {
    {RelationKind::PointOnLine, "point_on_line", 3, false},
    {RelationKind::PointOnCircle, "point_on_circle", 2, false},
    {RelationKind::Perpendicular, "perpendicular", 4, false},
    {RelationKind::Parallel, "parallel", 4, false},
    {RelationKind::EqualLength, "equal_length", 4, false},
    {RelationKind::FixedLength, "fixed_length", 2, true},
    {RelationKind::FixedAngle, "fixed_angle", 3, true},
    {RelationKind::Collinear, "collinear", 3, false},
    {RelationKind::Midpoint, "midpoint", 3, false},
};

const RelationInfo& info(RelationKind kind) {
    for (const auto& r : kRelations)
        if (r.kind == kind) return r;
    return kRelations[0];
}

}  // namespace

std::string_view to_string(RelationKind kind) { return info(kind).name; }

std::optional<RelationKind> relation_kind_from_string(std::string_view name) {
    for (const auto& r : kRelations)
        if (r.name == name) return r.kind;
    return std::nullopt;
}

std::size_t relation_arity(RelationKind kind) { return info(kind).arity; }
bool relation_takes_value(RelationKind kind) { return info(kind).has_value; }

std::string ObjectDecl::ref() const {
    std::string out(to_string(kind));
    out += '_';
    for (const auto& p : points) out += p;
    return out;
}

std::string RelationDecl::describe() const {
    std::string out(to_string(kind));
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ',';
        out += args[i];
    }
    if (value) {
        if (std::isfinite(*value))
            out += ";" + format_real(*value);
        else
            out += std::isnan(*value) ? ";nan" : (*value > 0 ? ";inf" : ";-inf");
    }
    out += ')';
    return out;
}

// ---- lookup ---------------------------------------------------------------

const PointDecl* find_point(const LogicForm& lf, std::string_view name) {
    auto it = std::lower_bound(lf.points.begin(), lf.points.end(), name,
                               [](const PointDecl& p, std::string_view n) { return p.name < n; });
    if (it != lf.points.end() && it->name == name) return &*it;
    // Forms built by hand may not be sorted yet.
    for (const auto& p : lf.points)
        if (p.name == name) return &p;
    return nullptr;
}

Vec2 position(const LogicForm& lf, std::string_view name) {
    const auto* p = find_point(lf, name);
    if (!p) throw UnknownLabel(std::string(name));
    return p->pos();
}

void add_point(LogicForm& lf, PointDecl p) {
    auto it = std::lower_bound(lf.points.begin(), lf.points.end(), p.name,
                               [](const PointDecl& q, const std::string& n) { return q.name < n; });
    lf.points.insert(it, std::move(p));
}

void sort_points(LogicForm& lf) {
    std::stable_sort(lf.points.begin(), lf.points.end(),
                     [](const PointDecl& a, const PointDecl& b) { return a.name < b.name; });
}

namespace {

struct RefParts {
    ObjectKind kind;
    std::size_t count;  // 0: any
    std::string labels;
    bool implicit_ok;
};

std::optional<RefParts> split_ref(std::string_view ref) {
    auto us = ref.find('_');
    if (us == std::string_view::npos || us + 1 >= ref.size()) return std::nullopt;
    auto word = ref.substr(0, us);
    std::string rest(ref.substr(us + 1));
    if (word == "line" || word == "segment") return RefParts{ObjectKind::Line, 2, rest, true};
    if (word == "circle") return RefParts{ObjectKind::Circle, 1, rest, false};
    if (word == "triangle") return RefParts{ObjectKind::Polygon, 3, rest, true};
    if (word == "polygon") return RefParts{ObjectKind::Polygon, 0, rest, false};
    return std::nullopt;
}

bool matches(const ObjectDecl& obj, const RefParts& parts) {
    if (obj.kind != parts.kind) return false;
    if (parts.count && obj.points.size() != parts.count) return false;
    const auto& pts = obj.points;
    switch (obj.kind) {
    case ObjectKind::Circle:
        return pts.size() == 1 && pts[0] == parts.labels;
    case ObjectKind::Line:
        return pts.size() == 2 && (pts[0] + pts[1] == parts.labels || pts[1] + pts[0] == parts.labels);
    case ObjectKind::Polygon: {
        const std::size_t n = pts.size();
        for (std::size_t start = 0; start < n; ++start) {
            std::string fwd, bwd;
            for (std::size_t k = 0; k < n; ++k) {
                fwd += pts[(start + k) % n];
                bwd += pts[(start + n - k) % n];
            }
            if (fwd == parts.labels || bwd == parts.labels) return true;
        }
        return false;
    }
    }
    return false;
}

bool split_rec(const LogicForm& lf, std::string_view run, std::size_t expected,
               std::vector<std::string>& acc) {
    if (run.empty()) return expected == 0 || acc.size() == expected;
    if (expected && acc.size() >= expected) return false;
    // Longest match first so "A'" is preferred over "A" followed by "'".
    for (std::size_t len = run.size(); len >= 1; --len) {
        auto head = run.substr(0, len);
        if (!find_point(lf, head)) continue;
        acc.emplace_back(head);
        if (split_rec(lf, run.substr(len), expected, acc)) return true;
        acc.pop_back();
    }
    return false;
}

}  // namespace

std::optional<std::vector<std::string>> split_labels(const LogicForm& lf, std::string_view run,
                                                     std::size_t expected_count) {
    std::vector<std::string> acc;
    if (split_rec(lf, run, expected_count, acc)) return acc;
    return std::nullopt;
}

const ObjectDecl* find_object(const LogicForm& lf, std::string_view ref) {
    auto parts = split_ref(ref);
    if (!parts) return nullptr;
    for (const auto& obj : lf.objects)
        if (matches(obj, *parts)) return &obj;
    return nullptr;
}

ObjectDecl resolve_object(const LogicForm& lf, std::string_view ref) {
    if (const auto* obj = find_object(lf, ref)) return *obj;
    auto parts = split_ref(ref);
    if (parts && parts->implicit_ok) {
        if (auto labels = split_labels(lf, parts->labels, parts->count)) {
            std::set<std::string> distinct(labels->begin(), labels->end());
            if (distinct.size() == labels->size()) {
                ObjectDecl obj;
                obj.kind = parts->kind;
                obj.points = std::move(*labels);
                return obj;
            }
        }
    }
    throw UnknownObject(std::string(ref));
}

// ---- validation ------------------------------------------------------------

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::InvalidLabel: return "InvalidLabel";
    case ViolationKind::DuplicateLabel: return "DuplicateLabel";
    case ViolationKind::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case ViolationKind::DanglingLabel: return "DanglingLabel";
    case ViolationKind::WrongArity: return "WrongArity";
    case ViolationKind::RepeatedVertex: return "RepeatedVertex";
    case ViolationKind::NonPositiveRadius: return "NonPositiveRadius";
    case ViolationKind::DuplicateObject: return "DuplicateObject";
    case ViolationKind::BadOrigin: return "BadOrigin";
    case ViolationKind::MissingValue: return "MissingValue";
    case ViolationKind::UnexpectedValue: return "UnexpectedValue";
    case ViolationKind::NonFiniteValue: return "NonFiniteValue";
    case ViolationKind::ValueOutOfRange: return "ValueOutOfRange";
    case ViolationKind::NotACircle: return "NotACircle";
    }
    return "?";
}

bool is_valid_label(std::string_view name) {
    if (name.empty()) return false;
    auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name[0])) return false;
    std::size_t i = 1;
    while (i < name.size() && (alpha(name[i]) || digit(name[i]) || name[i] == '_')) ++i;
    while (i < name.size() && name[i] == '\'') ++i;
    return i == name.size();
}

namespace {

class Validator {
public:
    explicit Validator(const LogicForm& lf) : lf_(lf) {}

    std::vector<Violation> run() {
        check_points();
        check_objects();
        check_relations();
        return std::move(out_);
    }

private:
    void report(ViolationKind kind, std::string subject, std::string message) {
        out_.push_back({kind, std::move(subject), std::move(message)});
    }

    bool known(const std::string& label) const { return names_.count(label) > 0; }

    void require(const std::string& label, const std::string& where) {
        if (!known(label)) report(ViolationKind::DanglingLabel, label, where + " references unknown point '" + label + "'");
    }

    void check_points() {
        for (const auto& p : lf_.points) {
            if (!is_valid_label(p.name)) report(ViolationKind::InvalidLabel, p.name, "invalid point name '" + p.name + "'");
            if (!names_.insert(p.name).second) report(ViolationKind::DuplicateLabel, p.name, "point '" + p.name + "' declared twice");
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                report(ViolationKind::NonFiniteCoordinate, p.name, "point '" + p.name + "' has a non-finite coordinate");
        }
    }

    void check_objects() {
        std::set<std::string> refs;
        for (const auto& obj : lf_.objects) {
            const std::string ref = obj.ref();
            const std::size_t n = obj.points.size();
            bool arity_ok = (obj.kind == ObjectKind::Line && n == 2) || (obj.kind == ObjectKind::Circle && n == 1) ||
                            (obj.kind == ObjectKind::Polygon && n >= 3);
            if (!arity_ok) report(ViolationKind::WrongArity, ref, ref + " has " + std::to_string(n) + " points");
            for (const auto& label : obj.points) require(label, ref);
            std::set<std::string> distinct(obj.points.begin(), obj.points.end());
            if (distinct.size() != n) report(ViolationKind::RepeatedVertex, ref, ref + " repeats a point");
            if (obj.kind == ObjectKind::Circle) {
                if (!(obj.radius > 0.0) || !std::isfinite(obj.radius))
                    report(ViolationKind::NonPositiveRadius, n ? obj.points[0] : ref, ref + " needs a positive finite radius");
            }
            if (arity_ok && distinct.size() == n && !refs.insert(canonical_key(obj)).second)
                report(ViolationKind::DuplicateObject, ref, ref + " declared twice");
            if (obj.origin) check_origin(obj, ref);
        }
    }

    static std::string canonical_key(const ObjectDecl& obj) {
        // Lines ignore direction, polygons ignore rotation/reversal.
        auto pts = obj.points;
        if (obj.kind == ObjectKind::Line) {
            std::sort(pts.begin(), pts.end());
        } else if (obj.kind == ObjectKind::Polygon) {
            std::vector<std::string> best;
            const std::size_t n = pts.size();
            for (std::size_t s = 0; s < n; ++s) {
                for (int dir : {1, -1}) {
                    std::vector<std::string> cand;
                    for (std::size_t k = 0; k < n; ++k) cand.push_back(pts[dir == 1 ? (s + k) % n : (s + n - k) % n]);
                    if (best.empty() || cand < best) best = cand;
                }
            }
            pts = best;
        }
        std::string key(to_string(obj.kind));
        for (const auto& p : pts) key += "|" + p;
        return key;
    }

    void check_origin(const ObjectDecl& obj, const std::string& ref) {
        const auto& o = *obj.origin;
        auto bad = [&](const std::string& why) { report(ViolationKind::BadOrigin, ref, ref + " origin: " + why); };
        if (o.op == OriginOp::DrawLine) {
            if (!o.from.empty() || !o.params.empty()) bad("draw_line takes no source");
            if (obj.kind != ObjectKind::Line) bad("draw_line creates lines only");
            return;
        }
        if (o.from.size() != obj.points.size()) bad("source has " + std::to_string(o.from.size()) + " points");
        for (const auto& label : o.from) require(label, ref + " origin");
        std::size_t want = o.op == OriginOp::Rotate ? 1 : o.op == OriginOp::Reflect ? 2 : 0;
        if (o.params.size() != want) bad("wrong parameter count");
        for (const auto& label : o.params) require(label, ref + " origin");
        if (o.op == OriginOp::Rotate && !std::isfinite(o.degrees)) bad("non-finite angle");
        if (o.op == OriginOp::Translate && !is_finite(o.vector)) bad("non-finite vector");
    }

    void check_relations() {
        std::set<std::string> circle_centers;
        for (const auto& obj : lf_.objects)
            if (obj.kind == ObjectKind::Circle && !obj.points.empty()) circle_centers.insert(obj.points[0]);

        for (const auto& rel : lf_.relations) {
            const std::string subject = rel.describe();
            if (rel.args.size() != relation_arity(rel.kind)) {
                report(ViolationKind::WrongArity, subject,
                       std::string(to_string(rel.kind)) + " takes " + std::to_string(relation_arity(rel.kind)) + " labels");
                continue;
            }
            for (const auto& label : rel.args) require(label, subject);
            if (relation_takes_value(rel.kind)) {
                if (!rel.value) {
                    report(ViolationKind::MissingValue, subject, subject + " needs a value");
                } else if (!std::isfinite(*rel.value)) {
                    report(ViolationKind::NonFiniteValue, subject, subject + " value is not finite");
                } else if ((rel.kind == RelationKind::FixedLength && *rel.value < 0) ||
                           (rel.kind == RelationKind::FixedAngle && (*rel.value < 0 || *rel.value > 180))) {
                    report(ViolationKind::ValueOutOfRange, subject, subject + " value out of range");
                }
            } else if (rel.value) {
                report(ViolationKind::UnexpectedValue, subject, subject + " takes no value");
            }
            if (!distinct_args(rel)) report(ViolationKind::RepeatedVertex, subject, subject + " repeats a label where distinct ones are needed");
            if (rel.kind == RelationKind::PointOnCircle && known(rel.args[1]) && !circle_centers.count(rel.args[1]))
                report(ViolationKind::NotACircle, rel.args[1], subject + ": no circle is centered at '" + rel.args[1] + "'");
        }
    }

    static bool distinct_args(const RelationDecl& rel) {
        const auto& a = rel.args;
        switch (rel.kind) {
        case RelationKind::Perpendicular:
        case RelationKind::Parallel:
        case RelationKind::EqualLength:
            return a[0] != a[1] && a[2] != a[3];
        case RelationKind::FixedAngle:
            return a[0] != a[1] && a[2] != a[1];
        default: {
            std::set<std::string> s(a.begin(), a.end());
            return s.size() == a.size();
        }
        }
    }

    const LogicForm& lf_;
    std::set<std::string> names_;
    std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> validate(const LogicForm& lf) { return Validator(lf).run(); }

// ---- serialization ---------------------------------------------------------

namespace {

void require_keys(const Json& j, std::initializer_list<std::string_view> required,
                  std::initializer_list<std::string_view> optional, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + " must be an object");
    for (const auto& [key, _] : j.items()) {
        bool ok = std::find(required.begin(), required.end(), key) != required.end() ||
                  std::find(optional.begin(), optional.end(), key) != optional.end();
        if (!ok) throw SchemaError(where + ": unknown key '" + key + "'");
    }
    for (auto key : required)
        if (!j.contains(std::string(key))) throw SchemaError(where + ": missing key '" + std::string(key) + "'");
}

std::string get_string(const Json& j, const char* key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_string()) throw SchemaError(where + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

double get_real(const Json& v, const std::string& where) {
    if (!v.is_number()) throw SchemaError(where + " must be a number");
    return v.get<double>();
}

std::vector<std::string> get_labels(const Json& v, const std::string& where) {
    if (!v.is_array()) throw SchemaError(where + " must be an array of labels");
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) throw SchemaError(where + " must contain only strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

Vec2 get_vec(const Json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) throw SchemaError(where + " must be a [x, y] pair");
    return {get_real(v[0], where), get_real(v[1], where)};
}

ObjectOrigin origin_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("op") || !j["op"].is_string()) throw SchemaError("origin needs an 'op'");
    const auto op = j["op"].get<std::string>();
    ObjectOrigin o;
    if (op == "draw_line") {
        require_keys(j, {"op"}, {}, "origin");
        o.op = OriginOp::DrawLine;
    } else if (op == "reflect") {
        require_keys(j, {"op", "from", "axis"}, {}, "origin");
        o.op = OriginOp::Reflect;
        o.params = get_labels(j["axis"], "origin axis");
    } else if (op == "rotate") {
        require_keys(j, {"op", "from", "center", "degrees"}, {}, "origin");
        o.op = OriginOp::Rotate;
        o.params = {get_string(j, "center", "origin")};
        o.degrees = get_real(j["degrees"], "origin degrees");
    } else if (op == "translate") {
        require_keys(j, {"op", "from", "vector"}, {}, "origin");
        o.op = OriginOp::Translate;
        o.vector = get_vec(j["vector"], "origin vector");
    } else {
        throw SchemaError("unknown origin op '" + op + "'");
    }
    if (j.contains("from")) o.from = get_labels(j["from"], "origin from");
    return o;
}

Json origin_to_json(const ObjectOrigin& o) {
    Json j = Json::object();
    j["op"] = std::string(to_string(o.op));
    switch (o.op) {
    case OriginOp::DrawLine: break;
    case OriginOp::Reflect:
        j["from"] = o.from;
        j["axis"] = o.params;
        break;
    case OriginOp::Rotate:
        j["from"] = o.from;
        j["center"] = o.params.empty() ? std::string() : o.params[0];
        j["degrees"] = o.degrees;
        break;
    case OriginOp::Translate:
        j["from"] = o.from;
        j["vector"] = Json::array({o.vector.x, o.vector.y});
        break;
    }
    return j;
}

ObjectDecl object_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) throw SchemaError("object needs a string 'type'");
    const auto type = j["type"].get<std::string>();
    ObjectDecl obj;
    if (type == "line" || type == "polygon") {
        require_keys(j, {"type", "points"}, {"origin"}, type);
        obj.kind = type == "line" ? ObjectKind::Line : ObjectKind::Polygon;
        obj.points = get_labels(j["points"], type + " points");
        if (obj.kind == ObjectKind::Line && obj.points.size() != 2) throw SchemaError("line needs exactly 2 points");
        if (obj.kind == ObjectKind::Polygon && obj.points.size() < 3) throw SchemaError("polygon needs at least 3 points");
    } else if (type == "circle") {
        require_keys(j, {"type", "center", "radius"}, {"origin"}, type);
        obj.kind = ObjectKind::Circle;
        obj.points = {get_string(j, "center", "circle")};
        obj.radius = get_real(j["radius"], "circle radius");
    } else {
        throw SchemaError("unknown object type '" + type + "'");
    }
    if (j.contains("origin")) obj.origin = origin_from_json(j["origin"]);
    return obj;
}

RelationDecl relation_from_json(const Json& j) {
    require_keys(j, {"type", "args"}, {"value"}, "relation");
    const auto type = get_string(j, "type", "relation");
    auto kind = relation_kind_from_string(type);
    if (!kind) throw SchemaError("unknown relation type '" + type + "'");
    RelationDecl rel;
    rel.kind = *kind;
    rel.args = get_labels(j["args"], type + " args");
    if (rel.args.size() != relation_arity(rel.kind))
        throw SchemaError(type + " takes " + std::to_string(relation_arity(rel.kind)) + " labels, got " + std::to_string(rel.args.size()));
    if (j.contains("value")) rel.value = get_real(j["value"], type + " value");
    if (relation_takes_value(rel.kind) != rel.value.has_value())
        throw SchemaError(type + (rel.value ? " takes no value" : " needs a value"));
    return rel;
}

}  // namespace

Json object_to_json(const ObjectDecl& obj) {
    Json j = Json::object();
    j["type"] = std::string(to_string(obj.kind));
    if (obj.kind == ObjectKind::Circle) {
        j["center"] = obj.points.empty() ? std::string() : obj.points[0];
        j["radius"] = obj.radius;
    } else {
        j["points"] = obj.points;
    }
    if (obj.origin) j["origin"] = origin_to_json(*obj.origin);
    return j;
}

LogicForm logic_form_from_json(const Json& j) {
    require_keys(j, {"points", "objects", "relations"}, {"annotations"}, "logic form");
    LogicForm lf;
    if (!j["points"].is_array()) throw SchemaError("'points' must be an array");
    for (const auto& p : j["points"]) {
        require_keys(p, {"name", "x", "y"}, {}, "point");
        lf.points.push_back({get_string(p, "name", "point"), get_real(p["x"], "point x"), get_real(p["y"], "point y")});
    }
    if (!j["objects"].is_array()) throw SchemaError("'objects' must be an array");
    for (const auto& o : j["objects"]) lf.objects.push_back(object_from_json(o));
    if (!j["relations"].is_array()) throw SchemaError("'relations' must be an array");
    for (const auto& r : j["relations"]) lf.relations.push_back(relation_from_json(r));
    if (j.contains("annotations")) {
        if (!j["annotations"].is_object()) throw SchemaError("'annotations' must be an object");
        for (const auto& [key, value] : j["annotations"].items()) {
            if (!value.is_string()) throw SchemaError("annotation '" + key + "' must be a string");
            lf.annotations[key] = value.get<std::string>();
        }
    }
    sort_points(lf);

    auto violations = validate(lf);
    for (const auto& v : violations)
        if (v.kind == ViolationKind::DanglingLabel) throw DanglingLabel(v.subject);
    if (!violations.empty()) throw SchemaError(violations.front().message);
    return lf;
}

LogicForm parse_logic_form(std::string_view text) { return logic_form_from_json(parse_json(text)); }

Json logic_form_to_json(const LogicForm& lf) {
    Json j = Json::object();
    auto points = lf.points;
    std::stable_sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    Json pts = Json::array();
    for (const auto& p : points) pts.push_back(Json{{"name", p.name}, {"x", p.x}, {"y", p.y}});
    j["points"] = std::move(pts);
    Json objs = Json::array();
    for (const auto& o : lf.objects) objs.push_back(object_to_json(o));
    j["objects"] = std::move(objs);
    Json rels = Json::array();
    for (const auto& r : lf.relations) {
        Json rj{{"type", std::string(to_string(r.kind))}, {"args", r.args}};
        if (r.value) rj["value"] = *r.value;
        rels.push_back(std::move(rj));
    }
    j["relations"] = std::move(rels);
    if (!lf.annotations.empty()) j["annotations"] = lf.annotations;
    return j;
}

std::string serialize_logic_form(const LogicForm& lf) { return canonical_dump(logic_form_to_json(lf)); }

bool approx_equal(const LogicForm& a, const LogicForm& b, double tol) {
    auto close = [tol](double x, double y) { return std::abs(x - y) <= tol; };
    if (a.points.size() != b.points.size() || a.objects.size() != b.objects.size() ||
        a.relations.size() != b.relations.size() || a.annotations != b.annotations)
        return false;
    for (const auto& p : a.points) {
        const auto* q = find_point(b, p.name);
        if (!q || !close(p.x, q->x) || !close(p.y, q->y)) return false;
    }
    for (std::size_t i = 0; i < a.objects.size(); ++i) {
        const auto& x = a.objects[i];
        const auto& y = b.objects[i];
        if (x.kind != y.kind || x.points != y.points || !close(x.radius, y.radius)) return false;
        if (x.origin.has_value() != y.origin.has_value()) return false;
        if (x.origin) {
            const auto& ox = *x.origin;
            const auto& oy = *y.origin;
            if (ox.op != oy.op || ox.from != oy.from || ox.params != oy.params || !close(ox.degrees, oy.degrees) ||
                !close(ox.vector.x, oy.vector.x) || !close(ox.vector.y, oy.vector.y))
                return false;
        }
    }
    for (std::size_t i = 0; i < a.relations.size(); ++i) {
        const auto& x = a.relations[i];
        const auto& y = b.relations[i];
        if (x.kind != y.kind || x.args != y.args || x.value.has_value() != y.value.has_value()) return false;
        if (x.value && !close(*x.value, *y.value)) return false;
    }
    return true;
}

// ---- diff ----------------------------------------------------------------

Json DiagramDiff::to_json() const {
    Json moved = Json::array();
    for (const auto& m : moved_points) moved.push_back(Json{{"label", m.label}, {"displacement", m.displacement}});
    return Json{{"missing_points", missing_points}, {"extra_points", extra_points}, {"moved_points", moved},
                {"missing_objects", missing_objects}, {"extra_objects", extra_objects}};
}

namespace {

std::string object_summary(const ObjectDecl& obj) {
    if (obj.kind == ObjectKind::Circle) return obj.ref() + "(r=" + format_real(obj.radius) + ")";
    return obj.ref();
}

// Objects that exist in `from` but have no geometric counterpart in `to`.
std::vector<std::string> unmatched_objects(const LogicForm& from, const LogicForm& to, double eps) {
    std::vector<std::string> out;
    for (const auto& obj : from.objects) {
        const auto* other = find_object(to, obj.ref());
        bool same = other && (obj.kind != ObjectKind::Circle || std::abs(other->radius - obj.radius) <= eps);
        if (!same) out.push_back(object_summary(obj));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

DiagramDiff diff_forms(const LogicForm& a, const LogicForm& b, double eps) {
    if (!(eps > 0)) throw SchemaError("diff tolerance must be positive");
    DiagramDiff diff;
    for (const auto& p : a.points) {
        const auto* q = find_point(b, p.name);
        if (!q) {
            diff.missing_points.push_back(p.name);
            continue;
        }
        double d = distance(p.pos(), q->pos());
        if (d > eps) diff.moved_points.push_back({p.name, d});
    }
    for (const auto& q : b.points)
        if (!find_point(a, q.name)) diff.extra_points.push_back(q.name);
    std::sort(diff.missing_points.begin(), diff.missing_points.end());
    std::sort(diff.extra_points.begin(), diff.extra_points.end());
    std::sort(diff.moved_points.begin(), diff.moved_points.end(),
              [](const MovedPoint& x, const MovedPoint& y) { return x.label < y.label; });
    diff.missing_objects = unmatched_objects(a, b, eps);
    diff.extra_objects = unmatched_objects(b, a, eps);
    return diff;
}

}  // namespace dyngeo

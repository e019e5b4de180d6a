// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dyngeo/canonical_json.hpp"
#include "dyngeo/geom.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dyngeo {

/// A named point. Names match [A-Za-z][A-Za-z0-9_]* optionally followed by
/// primes (A', A''), the form transformed copies receive.
struct PointDecl {
    std::string name;
    double x = 0.0;
    double y = 0.0;

    Vec2 pos() const { return {x, y}; }
    friend bool operator==(const PointDecl&, const PointDecl&) = default;
};

enum class ObjectKind { Line, Circle, Polygon };

std::string_view to_string(ObjectKind kind);

enum class OriginOp { DrawLine, Reflect, Rotate, Translate };

std::string_view to_string(OriginOp op);

/// Records which action created an object. For transformed copies, `from`
/// lists the pre-image labels in the same order as the copy's points.
struct ObjectOrigin {
    OriginOp op = OriginOp::DrawLine;
    std::vector<std::string> from;
    std::vector<std::string> params;  // rotate: {center}; reflect: {axis p, axis q}
    double degrees = 0.0;             // rotate
    Vec2 vector;                      // translate

    friend bool operator==(const ObjectOrigin&, const ObjectOrigin&) = default;
};

/// A drawn object. `points` holds the two endpoints of a line, the ordered
/// vertices of a polygon, or the single center label of a circle.
struct ObjectDecl {
    ObjectKind kind = ObjectKind::Line;
    std::vector<std::string> points;
    double radius = 0.0;  // circles only
    std::optional<ObjectOrigin> origin;

    // "line_AB", "circle_O", "polygon_ABC"
    std::string ref() const;
    bool auxiliary() const { return origin.has_value(); }
    const std::string& center() const { return points.front(); }

    friend bool operator==(const ObjectDecl&, const ObjectDecl&) = default;
};

enum class RelationKind {
    PointOnLine,
    PointOnCircle,
    Perpendicular,
    Parallel,
    EqualLength,
    FixedLength,
    FixedAngle,
    Collinear,
    Midpoint,
};

std::string_view to_string(RelationKind kind);
std::optional<RelationKind> relation_kind_from_string(std::string_view name);
// Number of point labels the relation takes.
std::size_t relation_arity(RelationKind kind);
bool relation_takes_value(RelationKind kind);

/// Argument layout, all labels:
///   point_on_line  P A B      point_on_circle P O (O centers a circle)
///   perpendicular  A B C D    parallel        A B C D
///   equal_length   A B C D    fixed_length    A B      + value (units)
///   fixed_angle    A V B      + value (degrees)
///   collinear      A B C      midpoint        M A B
struct RelationDecl {
    RelationKind kind = RelationKind::Collinear;
    std::vector<std::string> args;
    std::optional<double> value;

    std::string describe() const;
    friend bool operator==(const RelationDecl&, const RelationDecl&) = default;
};

struct LogicForm {
    std::vector<PointDecl> points;  // kept sorted by name
    std::vector<ObjectDecl> objects;
    std::vector<RelationDecl> relations;
    std::map<std::string, std::string> annotations;

    friend bool operator==(const LogicForm&, const LogicForm&) = default;
};

// ---- lookup ---------------------------------------------------------------

const PointDecl* find_point(const LogicForm& lf, std::string_view name);
// Throws UnknownLabel.
Vec2 position(const LogicForm& lf, std::string_view name);
// Inserts keeping points sorted; the caller guarantees the name is new.
void add_point(LogicForm& lf, PointDecl p);
void sort_points(LogicForm& lf);

// Resolves "line_AB", "circle_O", "polygon_ABCD" or "triangle_ABC" against
// the declared objects. Line refs match either endpoint order; polygon refs
// match any rotation or reversal of the vertex cycle.
const ObjectDecl* find_object(const LogicForm& lf, std::string_view ref);

// As find_object, but "triangle_ABC" and "line_AB" also resolve to an
// undeclared triangle/segment when the labels exist. Throws UnknownObject.
ObjectDecl resolve_object(const LogicForm& lf, std::string_view ref);

// Splits a run of concatenated labels ("AB'C") into existing point names.
std::optional<std::vector<std::string>> split_labels(const LogicForm& lf, std::string_view run,
                                                     std::size_t expected_count = 0);

// ---- validation ------------------------------------------------------------

enum class ViolationKind {
    InvalidLabel,
    DuplicateLabel,
    NonFiniteCoordinate,
    DanglingLabel,
    WrongArity,
    RepeatedVertex,
    NonPositiveRadius,
    DuplicateObject,
    BadOrigin,
    MissingValue,
    UnexpectedValue,
    NonFiniteValue,
    ValueOutOfRange,
    NotACircle,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string subject;  // the offending label, object ref or relation
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate(const LogicForm& lf);
bool is_valid_label(std::string_view name);

// ---- serialization ---------------------------------------------------------

// Throws SyntaxError, SchemaError or DanglingLabel.
LogicForm parse_logic_form(std::string_view text);
LogicForm logic_form_from_json(const Json& j);
Json logic_form_to_json(const LogicForm& lf);
// Canonical: sorted keys, points by name, reals via format_real.
std::string serialize_logic_form(const LogicForm& lf);

Json object_to_json(const ObjectDecl& obj);

// Field-by-field equality with coordinates, radii and values within tol.
bool approx_equal(const LogicForm& a, const LogicForm& b, double tol);

// ---- diff ----------------------------------------------------------------

inline constexpr double kDefaultDiffEps = 1e-6;

struct MovedPoint {
    std::string label;
    double displacement = 0.0;
    friend bool operator==(const MovedPoint&, const MovedPoint&) = default;
};

/// What changes turn `a` into `b`: "missing" entries are in a only, "extra"
/// entries in b only. Object entries are summaries like "line_AB" or
/// "circle_O(r=5)".
struct DiagramDiff {
    std::vector<std::string> missing_points;
    std::vector<std::string> extra_points;
    std::vector<MovedPoint> moved_points;
    std::vector<std::string> missing_objects;
    std::vector<std::string> extra_objects;

    bool empty() const {
        return missing_points.empty() && extra_points.empty() && moved_points.empty() &&
               missing_objects.empty() && extra_objects.empty();
    }
    Json to_json() const;
};

DiagramDiff diff_forms(const LogicForm& a, const LogicForm& b, double eps = kDefaultDiffEps);

}  // namespace dyngeo

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dyngeo/action.hpp"
#include "dyngeo/answer.hpp"
#include "dyngeo/logic_form.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dyngeo {

enum class FactKind {
    EqualSegments,       // A B C D: |AB| = |CD|
    EqualAngles,         // A V B C W D: angle AVB = angle CWD
    AngleValue,          // A V B + degrees
    LengthValue,         // A B + units
    Parallel,            // A B C D: line AB || line CD
    Perpendicular,       // A B C D
    CongruentTriangles,  // A B C D E F, in correspondence
    Collinear,           // A B C
    Midpoint,            // M A B
};

std::string_view to_string(FactKind kind);
std::optional<FactKind> fact_kind_from_string(std::string_view name);

struct Provenance {
    std::string rule;
    std::vector<std::size_t> premises;  // indices of earlier facts

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

// Rule names. Facts from the first three have no premises.
inline constexpr std::string_view kRuleGiven = "given";            // a relation of the form
inline constexpr std::string_view kRuleDiagram = "diagram";        // read off drawn lines
inline constexpr std::string_view kRuleRigidCopy = "rigid_copy";   // a transformed copy and its pre-image
inline constexpr std::string_view kRuleAngleSum = "angle_sum";
inline constexpr std::string_view kRuleVertical = "vertical_angles";
inline constexpr std::string_view kRuleLinearPair = "linear_pair";
inline constexpr std::string_view kRuleIsosceles = "isosceles_base_angles";
inline constexpr std::string_view kRuleSSS = "congruent_sss";
inline constexpr std::string_view kRuleSAS = "congruent_sas";
inline constexpr std::string_view kRuleASA = "congruent_asa";
inline constexpr std::string_view kRuleCorresponding = "corresponding_parts";
inline constexpr std::string_view kRuleAlternate = "alternate_angles";
inline constexpr std::string_view kRuleMidpoint = "midpoint_halves";
inline constexpr std::string_view kRuleRightAngle = "right_angle";
inline constexpr std::string_view kRuleTransitive = "transitivity";
inline constexpr std::string_view kRuleEqualValue = "equal_value";

/// Arguments are canonical: coincident points collapse to one label, an
/// angle arm is named by the smallest label on its ray, segments, lines and
/// equal pairs are sorted. Two facts with the same key state the same thing.
struct Fact {
    FactKind kind = FactKind::Collinear;
    std::vector<std::string> args;
    std::optional<double> value;
    Provenance provenance;

    std::string key() const;
    std::string describe() const;
    Json to_json() const;

    friend bool operator==(const Fact&, const Fact&) = default;
};

class FactSet {
public:
    // Keeps the first fact for a key. Returns the index and whether it was new.
    std::pair<std::size_t, bool> add(Fact fact);
    std::optional<std::size_t> find(const std::string& key) const;
    bool contains(const std::string& key) const { return index_.count(key) != 0; }

    const std::vector<Fact>& facts() const { return facts_; }
    std::size_t size() const { return facts_.size(); }
    bool empty() const { return facts_.empty(); }
    const Fact& operator[](std::size_t i) const { return facts_[i]; }

    // Every key of `other` appears here.
    bool includes(const FactSet& other) const;
    Json to_json() const;

private:
    std::vector<Fact> facts_;
    std::map<std::string, std::size_t> index_;
};

/// Forward chaining to a fixpoint. The seed is copied first, then the
/// form's relations, then whatever the rules derive:
/// angle sum, vertical angles and linear pairs, isosceles base angles,
/// SSS/SAS/ASA congruence with corresponding parts, congruence of
/// transformed copies, alternate angles between parallels, midpoint halves,
/// plus transitivity of equalities and value propagation.
/// Triangles take part only when all three sides are drawn.
FactSet derive_facts(const LogicForm& lf, const FactSet& seed = {});

// Numerical check of a fact against the coordinates of the form.
bool fact_holds(const LogicForm& lf, const Fact& fact, double tol = 1e-6);

struct ProvenanceReport {
    bool ok = true;
    std::string message;  // first problem found
};

// Premises point backwards, only base rules are leaves, every fact holds in
// the diagram and names points of the form.
ProvenanceReport validate_provenance(const LogicForm& lf, const FactSet& facts);

// ---- goals -------------------------------------------------------------------

/// What a problem asks, stored in the form's "goal" annotation:
///   angle A B C            measure of angle ABC, degrees
///   length A B             length of AB
///   ratio A B C D          |AB| : |CD|
///   relation A B C D       "perpendicular" or "parallel"
///   segments A B C D       "equal" when |AB| = |CD|
///   angles A B C D E F     "equal" when angle ABC = angle DEF
///   triangle A B C         "equilateral", "isosceles right triangle",
///                          "isosceles" or "right triangle"
struct Goal {
    enum class Kind { Angle, Length, Ratio, Relation, Segments, Angles, Triangle };
    Kind kind = Kind::Angle;
    std::vector<std::string> args;

    std::string to_string() const;
    friend bool operator==(const Goal&, const Goal&) = default;
};

// Throws SchemaError.
Goal parse_goal(std::string_view text);
// The form's "goal" annotation, if any.
std::optional<Goal> goal_of(const LogicForm& lf);

struct GoalAnswer {
    AnswerValue answer;
    std::vector<std::size_t> support;  // facts the answer rests on
};

// Throws UnknownLabel when the goal names a missing point.
std::optional<GoalAnswer> evaluate_goal(const LogicForm& lf, const Goal& goal, const FactSet& facts);

struct Candidate {
    Action action;
    bool closes_goal = false;        // the goal is derivable right after it
    bool closes_in_two = false;      // ... or after one follow-up construction
    std::size_t new_facts = 0;
};

/// Auxiliary constructions worth trying, best first. Empty when the goal is
/// already derivable. Every returned action executes on `lf`.
std::vector<Candidate> rank_constructions(const LogicForm& lf, const Goal& goal, const FactSet& facts);
std::vector<Action> propose_construction(const LogicForm& lf, const Goal& goal, const FactSet& facts);

// First unused single-letter name, used when a construction labels a point.
std::string fresh_point_name(const LogicForm& lf);

}  // namespace dyngeo

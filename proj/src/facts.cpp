// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/prover.hpp"

#include "dyngeo/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace dyngeo {

namespace {

struct KindInfo {
    FactKind kind;
    std::string_view name;
    std::size_t arity;
    bool valued;
};

constexpr std::array<KindInfo, 9> kKinds{{
    {FactKind::EqualSegments, "equal_segments", 4, false},
    {FactKind::EqualAngles, "equal_angles", 6, false},
    {FactKind::AngleValue, "angle_value", 3, true},
    {FactKind::LengthValue, "length_value", 2, true},
    {FactKind::Parallel, "parallel", 4, false},
    {FactKind::Perpendicular, "perpendicular", 4, false},
    {FactKind::CongruentTriangles, "congruent_triangles", 6, false},
    {FactKind::Collinear, "collinear", 3, false},
    {FactKind::Midpoint, "midpoint", 3, false},
}};

const KindInfo& info(FactKind kind) {
    for (const auto& k : kKinds)
        if (k.kind == kind) return k;
    throw Error("unknown fact kind");
}

std::string join(const std::vector<std::string>& args, std::size_t from, std::size_t to) {
    std::string s;
    for (std::size_t i = from; i < to && i < args.size(); ++i) s += args[i];
    return s;
}

bool close_length(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::string_view to_string(FactKind kind) { return info(kind).name; }

std::optional<FactKind> fact_kind_from_string(std::string_view name) {
    for (const auto& k : kKinds)
        if (k.name == name) return k.kind;
    return std::nullopt;
}

std::string Fact::key() const {
    std::string k(to_string(kind));
    k += ':';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) k += ',';
        k += args[i];
    }
    return k;
}

std::string Fact::describe() const {
    auto v = [this] { return value ? format_real(*value) : std::string("?"); };
    switch (kind) {
    case FactKind::EqualSegments: return join(args, 0, 2) + " = " + join(args, 2, 4);
    case FactKind::EqualAngles: return "angle " + join(args, 0, 3) + " = angle " + join(args, 3, 6);
    case FactKind::AngleValue: return "angle " + join(args, 0, 3) + " = " + v() + " deg";
    case FactKind::LengthValue: return join(args, 0, 2) + " = " + v();
    case FactKind::Parallel: return join(args, 0, 2) + " || " + join(args, 2, 4);
    case FactKind::Perpendicular: return join(args, 0, 2) + " _|_ " + join(args, 2, 4);
    case FactKind::CongruentTriangles: return "triangle " + join(args, 0, 3) + " ~= triangle " + join(args, 3, 6);
    case FactKind::Collinear: return join(args, 0, 3) + " collinear";
    case FactKind::Midpoint: return args[0] + " midpoint of " + join(args, 1, 3);
    }
    return key();
}

Json Fact::to_json() const {
    Json j{{"kind", std::string(to_string(kind))}, {"args", args}, {"rule", provenance.rule},
           {"premises", provenance.premises}};
    if (value) j["value"] = *value;
    return j;
}

std::pair<std::size_t, bool> FactSet::add(Fact fact) {
    auto k = fact.key();
    if (auto it = index_.find(k); it != index_.end()) return {it->second, false};
    std::size_t i = facts_.size();
    index_.emplace(std::move(k), i);
    facts_.push_back(std::move(fact));
    return {i, true};
}

std::optional<std::size_t> FactSet::find(const std::string& key) const {
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    return std::nullopt;
}

bool FactSet::includes(const FactSet& other) const {
    return std::all_of(other.index_.begin(), other.index_.end(),
                       [this](const auto& kv) { return index_.count(kv.first) != 0; });
}

Json FactSet::to_json() const {
    Json arr = Json::array();
    for (const auto& f : facts_) arr.push_back(f.to_json());
    return arr;
}

bool fact_holds(const LogicForm& lf, const Fact& f, double tol) {
    if (f.args.size() != info(f.kind).arity) return false;
    if (info(f.kind).valued != f.value.has_value()) return false;
    for (const auto& a : f.args)
        if (!find_point(lf, a)) return false;
    auto P = [&](std::size_t i) { return position(lf, f.args[i]); };
    auto unit = [](Vec2 v) { return (1.0 / norm(v)) * v; };
    try {
        switch (f.kind) {
        case FactKind::EqualSegments: return close_length(distance(P(0), P(1)), distance(P(2), P(3)), tol);
        case FactKind::EqualAngles:
            return std::abs(angle_measure(P(0), P(1), P(2)) - angle_measure(P(3), P(4), P(5))) <= tol;
        case FactKind::AngleValue: return std::abs(angle_measure(P(0), P(1), P(2)) - *f.value) <= tol;
        case FactKind::LengthValue: return close_length(distance(P(0), P(1)), *f.value, tol);
        case FactKind::Parallel:
        case FactKind::Perpendicular: {
            Vec2 u = P(1) - P(0), w = P(3) - P(2);
            if (norm(u) < kDegenerateSeparation || norm(w) < kDegenerateSeparation) return false;
            double c = f.kind == FactKind::Parallel ? cross(unit(u), unit(w)) : dot(unit(u), unit(w));
            return std::abs(c) <= tol;
        }
        case FactKind::CongruentTriangles:
            for (std::size_t i = 0; i < 3; ++i) {
                std::size_t j = (i + 1) % 3;
                if (!close_length(distance(P(i), P(j)), distance(P(3 + i), P(3 + j)), tol)) return false;
            }
            return true;
        case FactKind::Collinear: {
            Vec2 u = P(1) - P(0), w = P(2) - P(0);
            double scale = std::max({1.0, dot(u, u), dot(w, w)});
            return std::abs(cross(u, w)) <= tol * scale;
        }
        case FactKind::Midpoint: {
            Vec2 d = 2.0 * P(0) - P(1) - P(2);
            return norm(d) <= tol * std::max(1.0, distance(P(1), P(2)));
        }
        }
    } catch (const DegenerateAngle&) {
        return false;
    }
    return false;
}

ProvenanceReport validate_provenance(const LogicForm& lf, const FactSet& facts) {
    static const std::set<std::string_view> leaves{kRuleGiven, kRuleDiagram, kRuleRigidCopy};
    static const std::set<std::string_view> derived{
        kRuleAngleSum, kRuleVertical, kRuleLinearPair, kRuleIsosceles, kRuleSSS,       kRuleSAS,
        kRuleASA,      kRuleCorresponding, kRuleAlternate, kRuleMidpoint, kRuleRightAngle, kRuleTransitive,
        kRuleEqualValue};
    for (std::size_t i = 0; i < facts.size(); ++i) {
        const auto& f = facts[i];
        const auto& pr = f.provenance;
        auto fail = [&](const std::string& why) {
            return ProvenanceReport{false, "fact " + std::to_string(i) + " (" + f.describe() + "): " + why};
        };
        if (pr.premises.empty()) {
            if (!leaves.count(pr.rule)) return fail("rule '" + pr.rule + "' needs premises");
        } else {
            if (!derived.count(pr.rule)) return fail("unknown rule '" + pr.rule + "'");
            for (auto p : pr.premises)
                if (p >= i) return fail("premise " + std::to_string(p) + " does not precede it");
        }
        if (!fact_holds(lf, f)) return fail("does not hold in the diagram");
    }
    return {};
}

}  // namespace dyngeo

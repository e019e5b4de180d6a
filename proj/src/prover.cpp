// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/prover.hpp"

#include "dyngeo/errors.hpp"
#include "dyngeo/executor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace dyngeo {

namespace {

constexpr double kTol = 1e-6;
constexpr int kMaxRounds = 200;
constexpr std::size_t kMaxSecondLevelTrials = 300;

using Seg = std::array<std::string, 2>;
using Ang = std::array<std::string, 3>;  // ray rep, vertex, ray rep
using Tri = std::array<std::string, 3>;
using Premises = std::vector<std::size_t>;

std::size_t prime_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\'')); }

// Fewer primes first, then by name: the original label names a cluster of
// coincident points.
bool label_before(const std::string& a, const std::string& b) {
    auto pa = prime_count(a), pb = prime_count(b);
    return pa != pb ? pa < pb : a < b;
}

// ---- the drawing as the rules see it ------------------------------------------

class Figure {
public:
    explicit Figure(const LogicForm& lf) : lf_(lf) {
        for (const auto& p : lf.points) {
            std::string home;
            for (const auto& label : labels_)
                if (distance(pos_.at(label), p.pos()) < kSnapEps) home = label;
            if (home.empty()) {
                labels_.push_back(p.name);
                pos_[p.name] = p.pos();
                alias_[p.name] = p.name;
                continue;
            }
            alias_[p.name] = home;
            if (label_before(p.name, home)) rename(home, p.name);
        }
        std::sort(labels_.begin(), labels_.end());

        for (const auto& obj : lf.objects) {
            if (obj.kind == ObjectKind::Circle) continue;
            for (const auto& piece : object_segments(lf, obj)) {
                auto a = canon(piece.a), b = canon(piece.b);
                if (a == b) continue;
                pieces_.push_back({a, b});
                std::vector<std::string> inside, carrier;
                for (const auto& p : labels_) {
                    if (!on_carrier(p, a, b)) continue;
                    carrier.push_back(p);
                    double t = param(p, a, b);
                    if (t > -kTol && t < 1 + kTol) inside.push_back(p);
                }
                for (std::size_t i = 0; i < inside.size(); ++i)
                    for (std::size_t j = i + 1; j < inside.size(); ++j) drawn_.insert(sorted(inside[i], inside[j]));
                carriers_.insert(carrier);
            }
        }

        for (std::size_t i = 0; i < labels_.size(); ++i)
            for (std::size_t j = i + 1; j < labels_.size(); ++j)
                for (std::size_t k = j + 1; k < labels_.size(); ++k) {
                    const auto &a = labels_[i], &b = labels_[j], &c = labels_[k];
                    if (drawn(a, b) && drawn(b, c) && drawn(a, c) && !collinear(a, b, c))
                        triangles_.push_back({a, b, c});
                }
    }

    const LogicForm& form() const { return lf_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Tri>& triangles() const { return triangles_; }
    const std::vector<Seg>& pieces() const { return pieces_; }
    const std::set<std::vector<std::string>>& carriers() const { return carriers_; }

    std::string canon(const std::string& label) const {
        auto it = alias_.find(label);
        if (it == alias_.end()) throw UnknownLabel(label);
        return it->second;
    }
    Vec2 pos(const std::string& label) const { return pos_.at(canon(label)); }

    static Seg sorted(const std::string& a, const std::string& b) { return a < b ? Seg{a, b} : Seg{b, a}; }

    bool drawn(const std::string& a, const std::string& b) const { return drawn_.count(sorted(canon(a), canon(b))) != 0; }

    bool on_carrier(const std::string& p, const std::string& a, const std::string& b) const {
        Vec2 A = pos(a), B = pos(b), P = pos(p);
        double len = distance(A, B);
        return std::abs(cross(B - A, P - A)) / len < kTol * std::max(1.0, len);
    }

    // Position of p along a->b, 0 at a and 1 at b.
    double param(const std::string& p, const std::string& a, const std::string& b) const {
        Vec2 A = pos(a), B = pos(b);
        return dot(pos(p) - A, B - A) / dot(B - A, B - A);
    }

    bool strictly_between(const std::string& p, const std::string& a, const std::string& b) const {
        if (!on_carrier(p, a, b)) return false;
        double t = param(p, a, b);
        return t > kTol && t < 1 - kTol;
    }

    bool collinear(const std::string& a, const std::string& b, const std::string& c) const {
        return on_carrier(c, a, b);
    }

    // Smallest label on the ray from v through p.
    std::string ray(const std::string& v, const std::string& p) const {
        auto key = std::make_pair(canon(v), canon(p));
        if (auto it = rays_.find(key); it != rays_.end()) return it->second;
        Vec2 V = pos(key.first), d = pos(key.second) - V;
        d = (1.0 / norm(d)) * d;
        std::string best = key.second;
        for (const auto& q : labels_) {
            if (q == key.first) continue;
            Vec2 e = pos(q) - V;
            double n = norm(e);
            if (std::abs(cross(d, e)) / n < kTol && dot(d, e) > 0 && q < best) best = q;
        }
        rays_.emplace(key, best);
        return best;
    }

    std::optional<Seg> seg(const std::string& a, const std::string& b) const {
        auto ca = canon(a), cb = canon(b);
        if (ca == cb) return std::nullopt;
        return sorted(ca, cb);
    }

    std::optional<Ang> angle(const std::string& a, const std::string& v, const std::string& b) const {
        auto ca = canon(a), cv = canon(v), cb = canon(b);
        if (ca == cv || cb == cv) return std::nullopt;
        auto ra = ray(cv, ca), rb = ray(cv, cb);
        if (ra == rb) return std::nullopt;
        if (rb < ra) std::swap(ra, rb);
        return Ang{ra, cv, rb};
    }

    // The carrier through a and b named by its two smallest labels.
    std::optional<Seg> line(const std::string& a, const std::string& b) const {
        auto ca = canon(a), cb = canon(b);
        if (ca == cb) return std::nullopt;
        std::vector<std::string> on;
        for (const auto& p : labels_)
            if (on_carrier(p, ca, cb)) on.push_back(p);
        return Seg{on[0], on[1]};
    }

    std::vector<std::string> points_on_line(const Seg& l) const {
        std::vector<std::string> on;
        for (const auto& p : labels_)
            if (on_carrier(p, l[0], l[1])) on.push_back(p);
        return on;
    }

    double measure(const Ang& k) const { return angle_measure(pos(k[0]), pos(k[1]), pos(k[2])); }
    double length(const Seg& s) const { return distance(pos(s[0]), pos(s[1])); }

private:
    void rename(const std::string& from, const std::string& to) {
        for (auto& [name, home] : alias_)
            if (home == from) home = to;
        alias_[to] = to;
        std::replace(labels_.begin(), labels_.end(), from, to);
        pos_[to] = pos_.at(from);
        pos_.erase(from);
    }

    const LogicForm& lf_;
    std::vector<std::string> labels_;
    std::map<std::string, std::string> alias_;
    std::map<std::string, Vec2> pos_;
    std::set<Seg> drawn_;
    std::vector<Seg> pieces_;
    std::set<std::vector<std::string>> carriers_;
    std::vector<Tri> triangles_;
    mutable std::map<std::pair<std::string, std::string>, std::string> rays_;
};

// ---- canonical fact builders ---------------------------------------------------

template <std::size_t N>
std::vector<std::string> flat(const std::array<std::string, N>& x, const std::array<std::string, N>& y) {
    std::vector<std::string> out(x.begin(), x.end());
    out.insert(out.end(), y.begin(), y.end());
    return out;
}

template <std::size_t N>
std::optional<Fact> equal_pair(FactKind kind, std::array<std::string, N> x, std::array<std::string, N> y) {
    if (x == y) return std::nullopt;
    if (y < x) std::swap(x, y);
    return Fact{kind, flat(x, y), std::nullopt, {}};
}

std::optional<Fact> equal_segments(const std::optional<Seg>& x, const std::optional<Seg>& y) {
    if (!x || !y) return std::nullopt;
    return equal_pair(FactKind::EqualSegments, *x, *y);
}

std::optional<Fact> equal_angles(const std::optional<Ang>& x, const std::optional<Ang>& y) {
    if (!x || !y) return std::nullopt;
    return equal_pair(FactKind::EqualAngles, *x, *y);
}

std::optional<Fact> angle_value(const std::optional<Ang>& k, double v) {
    if (!k) return std::nullopt;
    return Fact{FactKind::AngleValue, {(*k)[0], (*k)[1], (*k)[2]}, v, {}};
}

std::optional<Fact> length_value(const std::optional<Seg>& s, double v) {
    if (!s) return std::nullopt;
    return Fact{FactKind::LengthValue, {(*s)[0], (*s)[1]}, v, {}};
}

std::optional<Fact> line_pair(FactKind kind, const std::optional<Seg>& x, const std::optional<Seg>& y) {
    if (!x || !y || *x == *y) return std::nullopt;
    return equal_pair(kind, *x, *y);
}

std::optional<Fact> congruent(const Tri& t, const Tri& u) {
    if (t == u) return std::nullopt;
    std::array<int, 3> perm{0, 1, 2};
    std::vector<std::string> best;
    do {
        Tri a{t[perm[0]], t[perm[1]], t[perm[2]]}, b{u[perm[0]], u[perm[1]], u[perm[2]]};
        for (auto cand : {flat(a, b), flat(b, a)})
            if (best.empty() || cand < best) best = cand;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return Fact{FactKind::CongruentTriangles, best, std::nullopt, {}};
}

std::optional<Fact> collinear_fact(const Figure& fig, const std::string& a, const std::string& b, const std::string& c) {
    std::array<std::string, 3> x{fig.canon(a), fig.canon(b), fig.canon(c)};
    std::sort(x.begin(), x.end());
    if (x[0] == x[1] || x[1] == x[2]) return std::nullopt;
    return Fact{FactKind::Collinear, {x[0], x[1], x[2]}, std::nullopt, {}};
}

std::optional<Fact> midpoint_fact(const Figure& fig, const std::string& m, const std::string& a, const std::string& b) {
    auto s = fig.seg(a, b);
    auto cm = fig.canon(m);
    if (!s || cm == (*s)[0] || cm == (*s)[1]) return std::nullopt;
    return Fact{FactKind::Midpoint, {cm, (*s)[0], (*s)[1]}, std::nullopt, {}};
}

std::string key_of(const std::optional<Fact>& f) { return f ? f->key() : std::string(); }

// ---- queries over a fact set -------------------------------------------------------

class Lookup {
public:
    Lookup(const Figure& fig, const FactSet& fs) : fig_(fig), fs_(fs) {}

    std::optional<std::pair<double, std::size_t>> angle_val(const std::optional<Ang>& k) const {
        return valued(angle_value(k, 0.0));
    }
    std::optional<std::pair<double, std::size_t>> length_val(const std::optional<Seg>& s) const {
        return valued(length_value(s, 0.0));
    }

    // Premises showing |x| = |y|, if known.
    std::optional<Premises> seg_eq(const std::optional<Seg>& x, const std::optional<Seg>& y) const {
        if (!x || !y) return std::nullopt;
        if (*x == *y) return Premises{};
        if (auto i = fs_.find(key_of(equal_segments(x, y)))) return Premises{*i};
        auto vx = length_val(x), vy = length_val(y);
        if (vx && vy && std::abs(vx->first - vy->first) <= kTol * std::max(1.0, std::abs(vx->first)))
            return Premises{vx->second, vy->second};
        return std::nullopt;
    }

    std::optional<Premises> ang_eq(const std::optional<Ang>& x, const std::optional<Ang>& y) const {
        if (!x || !y) return std::nullopt;
        if (*x == *y) return Premises{};
        if (auto i = fs_.find(key_of(equal_angles(x, y)))) return Premises{*i};
        auto vx = angle_val(x), vy = angle_val(y);
        if (vx && vy && std::abs(vx->first - vy->first) <= kTol) return Premises{vx->second, vy->second};
        return std::nullopt;
    }

    std::optional<std::size_t> find(const std::optional<Fact>& f) const {
        if (!f) return std::nullopt;
        return fs_.find(f->key());
    }

private:
    std::optional<std::pair<double, std::size_t>> valued(const std::optional<Fact>& probe) const {
        if (!probe) return std::nullopt;
        auto i = fs_.find(probe->key());
        if (!i) return std::nullopt;
        return std::make_pair(*fs_[*i].value, *i);
    }

    const Figure& fig_;
    const FactSet& fs_;
};

Premises merge(std::initializer_list<Premises> parts) {
    Premises out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---- forward chaining ------------------------------------------------------------

class Engine {
public:
    Engine(const Figure& fig, FactSet& fs) : fig_(fig), fs_(fs), q_(fig, fs) {}

    void run() {
        add_relations();
        add_rigid_copies();
        for (int round = 0; round < kMaxRounds; ++round) {
            changed_ = false;
            midpoint_halves();
            right_angles();
            straight_lines();
            alternate_angles();
            angle_sum();
            isosceles();
            congruence();
            corresponding_parts();
            transitivity(FactKind::EqualSegments);
            transitivity(FactKind::EqualAngles);
            equal_values();
            if (!changed_) break;
        }
    }

private:
    // Adds a fact whose value is consistent with the drawing; facts that
    // contradict the coordinates are dropped rather than trusted.
    std::optional<std::size_t> add(std::optional<Fact> f, std::string_view rule, Premises premises) {
        if (!f) return std::nullopt;
        if (auto i = fs_.find(f->key())) return i;
        f->provenance = {std::string(rule), std::move(premises)};
        if (!fact_holds(fig_.form(), *f)) return std::nullopt;
        auto [i, fresh] = fs_.add(std::move(*f));
        changed_ |= fresh;
        return i;
    }

    std::optional<std::size_t> diagram_collinear(const std::string& a, const std::string& b, const std::string& c) {
        return add(collinear_fact(fig_, a, b, c), kRuleDiagram, {});
    }

    // Diagram facts placing each point on the named line.
    std::optional<Premises> on_line(const std::optional<Seg>& l, std::initializer_list<std::string> pts) {
        if (!l) return std::nullopt;
        Premises out;
        for (const auto& x : pts) {
            if (x == (*l)[0] || x == (*l)[1]) continue;
            auto c = diagram_collinear((*l)[0], (*l)[1], x);
            if (!c) return std::nullopt;
            out.push_back(*c);
        }
        return out;
    }

    void add_relations() {
        const auto& lf = fig_.form();
        for (const auto& r : lf.relations) {
            const auto& a = r.args;
            std::optional<Fact> f;
            switch (r.kind) {
            case RelationKind::PointOnLine: f = collinear_fact(fig_, a[0], a[1], a[2]); break;
            case RelationKind::Collinear: f = collinear_fact(fig_, a[0], a[1], a[2]); break;
            case RelationKind::Midpoint: f = midpoint_fact(fig_, a[0], a[1], a[2]); break;
            case RelationKind::EqualLength: f = equal_segments(fig_.seg(a[0], a[1]), fig_.seg(a[2], a[3])); break;
            case RelationKind::FixedLength: f = length_value(fig_.seg(a[0], a[1]), *r.value); break;
            case RelationKind::FixedAngle: f = angle_value(fig_.angle(a[0], a[1], a[2]), *r.value); break;
            case RelationKind::Parallel:
                f = line_pair(FactKind::Parallel, fig_.line(a[0], a[1]), fig_.line(a[2], a[3]));
                break;
            case RelationKind::Perpendicular:
                f = line_pair(FactKind::Perpendicular, fig_.line(a[0], a[1]), fig_.line(a[2], a[3]));
                break;
            case RelationKind::PointOnCircle:
                for (const auto& obj : lf.objects)
                    if (obj.kind == ObjectKind::Circle && obj.center() == a[1]) {
                        f = length_value(fig_.seg(a[1], a[0]), obj.radius);
                        break;
                    }
                break;
            }
            add(f, kRuleGiven, {});
        }
    }

    void add_rigid_copies() {
        for (const auto& obj : fig_.form().objects) {
            if (!obj.origin || obj.origin->op == OriginOp::DrawLine || obj.kind == ObjectKind::Circle) continue;
            const auto& from = obj.origin->from;
            const auto& to = obj.points;
            if (from.size() != to.size()) continue;
            std::size_t n = to.size();
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) {
                    add(equal_segments(fig_.seg(from[i], from[j]), fig_.seg(to[i], to[j])), kRuleRigidCopy, {});
                    for (std::size_t k = j + 1; k < n; ++k) {
                        Tri t{fig_.canon(from[i]), fig_.canon(from[j]), fig_.canon(from[k])};
                        Tri u{fig_.canon(to[i]), fig_.canon(to[j]), fig_.canon(to[k])};
                        if (fig_.collinear(t[0], t[1], t[2]) || std::set<std::string>(t.begin(), t.end()).size() < 3)
                            continue;
                        add(congruent(t, u), kRuleRigidCopy, {});
                    }
                }
            if (obj.origin->op != OriginOp::Rotate || obj.origin->params.empty()) continue;
            const auto& c = obj.origin->params[0];
            double turn = std::fmod(std::abs(obj.origin->degrees), 360.0);
            if (turn > 180.0) turn = 360.0 - turn;
            for (std::size_t i = 0; i < n; ++i) {
                if (fig_.canon(from[i]) == fig_.canon(c) || fig_.canon(from[i]) == fig_.canon(to[i])) continue;
                add(equal_segments(fig_.seg(c, from[i]), fig_.seg(c, to[i])), kRuleRigidCopy, {});
                if (std::abs(turn - 180.0) < kTol)
                    add(midpoint_fact(fig_, c, from[i], to[i]), kRuleRigidCopy, {});
                else if (turn > kTol)
                    add(angle_value(fig_.angle(from[i], c, to[i]), turn), kRuleRigidCopy, {});
            }
        }
    }

    void midpoint_halves() {
        for (std::size_t i = 0; i < fs_.size(); ++i) {
            if (fs_[i].kind != FactKind::Midpoint) continue;
            auto a = fs_[i].args;
            auto h1 = fig_.seg(a[0], a[1]), h2 = fig_.seg(a[0], a[2]), whole = fig_.seg(a[1], a[2]);
            auto eq = add(equal_segments(h1, h2), kRuleMidpoint, {i});
            if (auto w = q_.length_val(whole)) {
                add(length_value(h1, w->first / 2), kRuleMidpoint, {i, w->second});
                add(length_value(h2, w->first / 2), kRuleMidpoint, {i, w->second});
            }
            for (const auto& h : {h1, h2})
                if (auto v = q_.length_val(h)) add(length_value(whole, 2 * v->first), kRuleMidpoint, {i, v->second});
            (void)eq;
        }
    }

    // A right angle at a labeled crossing and perpendicular lines imply each other.
    void right_angles() {
        for (std::size_t i = 0; i < fs_.size(); ++i) {
            Fact f = fs_[i];
            if (f.kind == FactKind::AngleValue && std::abs(*f.value - 90.0) < kTol) {
                const auto& a = f.args;
                auto l1 = fig_.line(a[1], a[0]), l2 = fig_.line(a[1], a[2]);
                auto c1 = on_line(l1, {a[1], a[0]}), c2 = on_line(l2, {a[1], a[2]});
                if (c1 && c2) add(line_pair(FactKind::Perpendicular, l1, l2), kRuleRightAngle, merge({{i}, *c1, *c2}));
            } else if (f.kind == FactKind::Perpendicular) {
                Seg l1{f.args[0], f.args[1]}, l2{f.args[2], f.args[3]};
                auto on1 = fig_.points_on_line(l1), on2 = fig_.points_on_line(l2);
                for (const auto& v : on1) {
                    if (std::find(on2.begin(), on2.end(), v) == on2.end()) continue;
                    for (const auto& p : on1)
                        for (const auto& r : on2)
                            if (p != v && r != v) {
                                auto c1 = on_line(l1, {v, p}), c2 = on_line(l2, {v, r});
                                if (c1 && c2)
                                    add(angle_value(fig_.angle(p, v, r), 90.0), kRuleRightAngle, merge({{i}, *c1, *c2}));
                            }
                }
            }
        }
    }

    // Vertical angles and linear pairs at every point inside a drawn line.
    void straight_lines() {
        for (const auto& v : fig_.labels()) {
            std::vector<std::pair<std::string, std::string>> straights;
            for (const auto& carrier : fig_.carriers()) {
                if (std::find(carrier.begin(), carrier.end(), v) == carrier.end()) continue;
                std::optional<std::string> plus, minus;
                for (const auto& p : carrier) {
                    if (p == v || !fig_.drawn(v, p)) continue;
                    const auto& ref = carrier[0] == v ? carrier[1] : carrier[0];
                    bool ahead = dot(fig_.pos(p) - fig_.pos(v), fig_.pos(ref) - fig_.pos(v)) > 0;
                    auto& slot = ahead ? plus : minus;
                    if (!slot) slot = fig_.ray(v, p);
                }
                if (plus && minus) straights.emplace_back(*plus, *minus);
            }
            std::set<std::string> rays;
            for (const auto& p : fig_.labels())
                if (p != v && fig_.drawn(v, p)) rays.insert(fig_.ray(v, p));

            for (const auto& [p, q] : straights) {
                auto col = diagram_collinear(p, v, q);
                if (!col) continue;
                for (const auto& r : rays) {
                    if (r == p || r == q) continue;
                    auto k1 = fig_.angle(p, v, r), k2 = fig_.angle(r, v, q);
                    if (auto val = q_.angle_val(k1)) add(angle_value(k2, 180.0 - val->first), kRuleLinearPair, {*col, val->second});
                    if (auto val = q_.angle_val(k2)) add(angle_value(k1, 180.0 - val->first), kRuleLinearPair, {*col, val->second});
                    if (auto eq = q_.ang_eq(k1, k2); eq && !eq->empty()) {
                        add(angle_value(k1, 90.0), kRuleLinearPair, merge({*eq, {*col}}));
                        add(angle_value(k2, 90.0), kRuleLinearPair, merge({*eq, {*col}}));
                    }
                }
            }
            for (std::size_t i = 0; i < straights.size(); ++i)
                for (std::size_t j = i + 1; j < straights.size(); ++j) {
                    const auto& [p1, q1] = straights[i];
                    const auto& [p2, q2] = straights[j];
                    auto c1 = diagram_collinear(p1, v, q1), c2 = diagram_collinear(p2, v, q2);
                    if (!c1 || !c2) continue;
                    add(equal_angles(fig_.angle(p1, v, p2), fig_.angle(q1, v, q2)), kRuleVertical, merge({{*c1, *c2}}));
                    add(equal_angles(fig_.angle(p1, v, q2), fig_.angle(q1, v, p2)), kRuleVertical, merge({{*c1, *c2}}));
                }
        }
    }

    void alternate_angles() {
        for (std::size_t i = 0; i < fs_.size(); ++i) {
            if (fs_[i].kind != FactKind::Parallel) continue;
            auto a = fs_[i].args;
            auto s1 = fig_.points_on_line({a[0], a[1]}), s2 = fig_.points_on_line({a[2], a[3]});
            for (const auto& x : s1)
                for (const auto& y : s2) {
                    if (x == y || !fig_.drawn(x, y)) continue;
                    Segment transversal{fig_.pos(x), fig_.pos(y)};
                    for (const auto& p : s1)
                        for (const auto& r : s2) {
                            if (p == x || r == y) continue;
                            double sp = signed_distance(transversal, fig_.pos(p));
                            double sr = signed_distance(transversal, fig_.pos(r));
                            if (sp * sr >= 0 || std::abs(sp) < kTol || std::abs(sr) < kTol) continue;
                            auto c1 = on_line(Seg{a[0], a[1]}, {p, x}), c2 = on_line(Seg{a[2], a[3]}, {r, y});
                            if (c1 && c2)
                                add(equal_angles(fig_.angle(p, x, y), fig_.angle(r, y, x)), kRuleAlternate,
                                    merge({{i}, *c1, *c2}));
                        }
                }
        }
    }

    void angle_sum() {
        for (const auto& t : fig_.triangles()) {
            std::array<std::optional<Ang>, 3> k{fig_.angle(t[1], t[0], t[2]), fig_.angle(t[0], t[1], t[2]),
                                               fig_.angle(t[0], t[2], t[1])};
            std::array<bool, 3> known{};
            std::array<double, 3> deg{};
            std::array<std::size_t, 3> src{};
            for (int i = 0; i < 3; ++i)
                if (auto v = q_.angle_val(k[i])) known[i] = true, deg[i] = v->first, src[i] = v->second;
            for (int miss = 0; miss < 3; ++miss) {
                int i = (miss + 1) % 3, j = (miss + 2) % 3;
                if (known[miss] || !known[i] || !known[j]) continue;
                add(angle_value(k[miss], 180.0 - deg[i] - deg[j]), kRuleAngleSum, merge({{src[i], src[j]}}));
            }
        }
    }

    void isosceles() {
        for (const auto& t : fig_.triangles())
            for (int apex = 0; apex < 3; ++apex) {
                const auto& a = t[apex];
                const auto& b = t[(apex + 1) % 3];
                const auto& c = t[(apex + 2) % 3];
                if (auto eq = q_.seg_eq(fig_.seg(a, b), fig_.seg(a, c)); eq && !eq->empty())
                    add(equal_angles(fig_.angle(a, b, c), fig_.angle(a, c, b)), kRuleIsosceles, *eq);
            }
    }

    void congruence() {
        const auto& tris = fig_.triangles();
        for (std::size_t i = 0; i < tris.size(); ++i)
            for (std::size_t j = i + 1; j < tris.size(); ++j) {
                const auto& t = tris[i];
                std::array<int, 3> perm{0, 1, 2};
                do {
                    Tri u{tris[j][perm[0]], tris[j][perm[1]], tris[j][perm[2]]};
                    try_congruent(t, u);
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
    }

    void try_congruent(const Tri& t, const Tri& u) {
        auto fact = congruent(t, u);
        if (!fact || fs_.contains(fact->key())) return;
        for (int i = 0; i < 3; ++i) {
            int j = (i + 1) % 3;
            double lt = fig_.length(*fig_.seg(t[i], t[j])), lu = fig_.length(*fig_.seg(u[i], u[j]));
            if (std::abs(lt - lu) > kTol * std::max(1.0, lt)) return;
        }
        auto side = [&](int i, int j) { return q_.seg_eq(fig_.seg(t[i], t[j]), fig_.seg(u[i], u[j])); };
        auto ang = [&](int i) {
            int a = (i + 1) % 3, b = (i + 2) % 3;
            return q_.ang_eq(fig_.angle(t[a], t[i], t[b]), fig_.angle(u[a], u[i], u[b]));
        };
        auto s01 = side(0, 1), s12 = side(1, 2), s02 = side(0, 2);
        if (s01 && s12 && s02 && !merge({*s01, *s12, *s02}).empty()) {
            add(fact, kRuleSSS, merge({*s01, *s12, *s02}));
            return;
        }
        std::array<std::optional<Premises>, 3> sides{s12, s02, s01};  // side opposite vertex i
        std::array<std::optional<Premises>, 3> angles{ang(0), ang(1), ang(2)};
        for (int i = 0; i < 3; ++i) {
            // SAS: the two sides meeting at i and the angle between them.
            const auto& x = sides[(i + 1) % 3];
            const auto& y = sides[(i + 2) % 3];
            if (x && y && angles[i]) {
                auto pr = merge({*x, *y, *angles[i]});
                if (!pr.empty()) {
                    add(fact, kRuleSAS, pr);
                    return;
                }
            }
        }
        for (int i = 0; i < 3; ++i) {
            // ASA: side opposite i and the two angles at its ends.
            int a = (i + 1) % 3, b = (i + 2) % 3;
            if (sides[i] && angles[a] && angles[b]) {
                auto pr = merge({*sides[i], *angles[a], *angles[b]});
                if (!pr.empty()) {
                    add(fact, kRuleASA, pr);
                    return;
                }
            }
        }
    }

    void corresponding_parts() {
        for (std::size_t n = 0; n < fs_.size(); ++n) {
            if (fs_[n].kind != FactKind::CongruentTriangles) continue;
            auto a = fs_[n].args;
            for (int i = 0; i < 3; ++i) {
                int j = (i + 1) % 3, k = (i + 2) % 3;
                add(equal_segments(fig_.seg(a[i], a[j]), fig_.seg(a[3 + i], a[3 + j])), kRuleCorresponding, {n});
                add(equal_angles(fig_.angle(a[j], a[i], a[k]), fig_.angle(a[3 + j], a[3 + i], a[3 + k])),
                    kRuleCorresponding, {n});
            }
        }
    }

    void transitivity(FactKind kind) {
        std::size_t half = kind == FactKind::EqualSegments ? 2 : 3;
        std::map<std::vector<std::string>, std::vector<std::pair<std::vector<std::string>, std::size_t>>> adj;
        for (std::size_t i = 0; i < fs_.size(); ++i) {
            if (fs_[i].kind != kind) continue;
            const auto& a = fs_[i].args;
            std::vector<std::string> x(a.begin(), a.begin() + half), y(a.begin() + half, a.end());
            adj[x].emplace_back(y, i);
            adj[y].emplace_back(x, i);
        }
        for (const auto& [mid, links] : adj)
            for (std::size_t p = 0; p < links.size(); ++p)
                for (std::size_t r = p + 1; r < links.size(); ++r) {
                    const auto& [x, i] = links[p];
                    const auto& [y, j] = links[r];
                    if (x == y) continue;
                    std::optional<Fact> f;
                    if (kind == FactKind::EqualSegments)
                        f = equal_pair(kind, Seg{x[0], x[1]}, Seg{y[0], y[1]});
                    else
                        f = equal_pair(kind, Ang{x[0], x[1], x[2]}, Ang{y[0], y[1], y[2]});
                    add(f, kRuleTransitive, merge({{i, j}}));
                }
    }

    void equal_values() {
        for (std::size_t i = 0; i < fs_.size(); ++i) {
            Fact f = fs_[i];
            if (f.kind == FactKind::EqualSegments) {
                Seg x{f.args[0], f.args[1]}, y{f.args[2], f.args[3]};
                if (auto v = q_.length_val(x)) add(length_value(y, v->first), kRuleEqualValue, {i, v->second});
                if (auto v = q_.length_val(y)) add(length_value(x, v->first), kRuleEqualValue, {i, v->second});
            } else if (f.kind == FactKind::EqualAngles) {
                Ang x{f.args[0], f.args[1], f.args[2]}, y{f.args[3], f.args[4], f.args[5]};
                if (auto v = q_.angle_val(x)) add(angle_value(y, v->first), kRuleEqualValue, {i, v->second});
                if (auto v = q_.angle_val(y)) add(angle_value(x, v->first), kRuleEqualValue, {i, v->second});
            }
        }
    }

    const Figure& fig_;
    FactSet& fs_;
    Lookup q_;
    bool changed_ = false;
};

// ---- goal reading ---------------------------------------------------------------

std::optional<Ratio> rationalize(double r) {
    if (!(r > 0) || !std::isfinite(r)) return std::nullopt;
    for (std::int64_t d = 1; d <= 1000; ++d) {
        double n = std::round(r * d);
        if (n >= 1 && std::abs(r - n / d) <= 1e-9 * std::max(1.0, r)) return Ratio::make(static_cast<std::int64_t>(n), d);
    }
    return std::nullopt;
}

std::optional<GoalAnswer> ratio_answer(const Figure& fig, const FactSet& fs, const Lookup& q, const Seg& s1,
                                       const Seg& s2) {
    auto v1 = q.length_val(s1), v2 = q.length_val(s2);
    if (v1 && v2)
        if (auto r = rationalize(v1->first / v2->first)) return GoalAnswer{*r, {v1->second, v2->second}};
    if (auto eq = q.seg_eq(s1, s2)) return GoalAnswer{Ratio::make(1, 1), *eq};
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (fs[i].kind != FactKind::Midpoint) continue;
        const auto& a = fs[i].args;
        auto whole = fig.seg(a[1], a[2]);
        for (const auto& half : {fig.seg(a[0], a[1]), fig.seg(a[0], a[2])}) {
            auto h1 = q.seg_eq(s1, half), w2 = q.seg_eq(s2, whole);
            if (h1 && w2) return GoalAnswer{Ratio::make(1, 2), merge({*h1, *w2, {i}})};
            auto w1 = q.seg_eq(s1, whole), h2 = q.seg_eq(s2, half);
            if (w1 && h2) return GoalAnswer{Ratio::make(2, 1), merge({*w1, *h2, {i}})};
        }
    }
    return std::nullopt;
}

std::optional<GoalAnswer> triangle_answer(const Figure& fig, const Lookup& q, const Goal& goal) {
    const auto& g = goal.args;
    std::array<std::optional<Seg>, 3> side{fig.seg(g[1], g[2]), fig.seg(g[0], g[2]), fig.seg(g[0], g[1])};
    std::array<std::optional<Ang>, 3> ang{fig.angle(g[1], g[0], g[2]), fig.angle(g[0], g[1], g[2]),
                                          fig.angle(g[0], g[2], g[1])};
    Premises iso_support, right_support, sixty;
    bool iso = false, equilateral = false, right = false;
    int sixties = 0;
    for (int i = 0; i < 3; ++i) {
        int j = (i + 1) % 3;
        if (auto eq = q.seg_eq(side[i], side[j]); eq && !iso) iso = true, iso_support = *eq;
        if (auto eq = q.ang_eq(ang[i], ang[j]); eq && !iso) iso = true, iso_support = *eq;
        if (auto v = q.angle_val(ang[i])) {
            if (std::abs(v->first - 90.0) < kTol) right = true, right_support = {v->second};
            if (std::abs(v->first - 60.0) < kTol) ++sixties, sixty.push_back(v->second);
        }
    }
    auto e1 = q.seg_eq(side[0], side[1]), e2 = q.seg_eq(side[1], side[2]);
    if (e1 && e2) equilateral = true, iso_support = merge({*e1, *e2});
    if (sixties >= 2) equilateral = true, iso_support = merge({sixty});
    if (equilateral) return GoalAnswer{Descriptor{"equilateral"}, iso_support};
    if (iso && right) return GoalAnswer{Descriptor{"isosceles right triangle"}, merge({iso_support, right_support})};
    if (iso) return GoalAnswer{Descriptor{"isosceles"}, iso_support};
    if (right) return GoalAnswer{Descriptor{"right triangle"}, right_support};
    return std::nullopt;
}

std::optional<GoalAnswer> evaluate(const Figure& fig, const Goal& goal, const FactSet& fs) {
    Lookup q(fig, fs);
    const auto& g = goal.args;
    for (const auto& label : g) fig.canon(label);
    switch (goal.kind) {
    case Goal::Kind::Angle:
        if (auto v = q.angle_val(fig.angle(g[0], g[1], g[2]))) return GoalAnswer{Numerical{v->first, "degree"}, {v->second}};
        return std::nullopt;
    case Goal::Kind::Length:
        if (auto v = q.length_val(fig.seg(g[0], g[1]))) return GoalAnswer{Numerical{v->first, ""}, {v->second}};
        return std::nullopt;
    case Goal::Kind::Ratio: {
        auto s1 = fig.seg(g[0], g[1]), s2 = fig.seg(g[2], g[3]);
        if (!s1 || !s2) return std::nullopt;
        return ratio_answer(fig, fs, q, *s1, *s2);
    }
    case Goal::Kind::Relation: {
        auto l1 = fig.line(g[0], g[1]), l2 = fig.line(g[2], g[3]);
        if (auto i = q.find(line_pair(FactKind::Perpendicular, l1, l2))) return GoalAnswer{Descriptor{"perpendicular"}, {*i}};
        if (auto i = q.find(line_pair(FactKind::Parallel, l1, l2))) return GoalAnswer{Descriptor{"parallel"}, {*i}};
        return std::nullopt;
    }
    case Goal::Kind::Segments:
        if (auto eq = q.seg_eq(fig.seg(g[0], g[1]), fig.seg(g[2], g[3]))) return GoalAnswer{Descriptor{"equal"}, *eq};
        return std::nullopt;
    case Goal::Kind::Angles:
        if (auto eq = q.ang_eq(fig.angle(g[0], g[1], g[2]), fig.angle(g[3], g[4], g[5])))
            return GoalAnswer{Descriptor{"equal"}, *eq};
        return std::nullopt;
    case Goal::Kind::Triangle: return triangle_answer(fig, q, goal);
    }
    return std::nullopt;
}

// ---- construction search ----------------------------------------------------------

struct GoalSpec {
    Goal::Kind kind;
    std::string_view word;
    std::size_t arity;
};

constexpr std::array<GoalSpec, 7> kGoals{{
    {Goal::Kind::Angle, "angle", 3},
    {Goal::Kind::Length, "length", 2},
    {Goal::Kind::Ratio, "ratio", 4},
    {Goal::Kind::Relation, "relation", 4},
    {Goal::Kind::Segments, "segments", 4},
    {Goal::Kind::Angles, "angles", 6},
    {Goal::Kind::Triangle, "triangle", 3},
}};

bool mentions(const std::set<std::string>& created, const std::string& label) { return created.count(label) != 0; }

// The three construction families. With `created` set, only actions that
// build on something the previous action added are kept.
std::vector<Action> generate(const LogicForm& lf, const Figure& fig, const std::set<std::string>* created) {
    std::vector<Action> out;
    auto keep = [&](std::initializer_list<std::string> labels) {
        if (!created) return true;
        for (const auto& l : labels)
            if (mentions(*created, l)) return true;
        return false;
    };
    const auto& labels = fig.labels();

    // (a) segments between unconnected points
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j)
            if (!fig.drawn(labels[i], labels[j]) && keep({labels[i], labels[j]}))
                out.push_back(DrawLine{labels[i], labels[j]});

    // (b) midpoints of drawn pieces
    std::set<std::pair<double, double>> seen;
    for (const auto& obj : lf.objects) {
        if (obj.kind == ObjectKind::Circle) continue;
        for (const auto& piece : object_segments(lf, obj)) {
            if (!keep({piece.a, piece.b, obj.ref()})) continue;
            Vec2 m = 0.5 * (piece.seg.p + piece.seg.q);
            bool taken = std::any_of(lf.points.begin(), lf.points.end(),
                                     [&](const PointDecl& p) { return distance(p.pos(), m) < kSnapEps; });
            if (taken || !seen.insert({m.x, m.y}).second) continue;
            out.push_back(LabelPoint{fresh_point_name(lf), m});
        }
    }

    // (c) rigid copies of figure triangles
    std::vector<Seg> axes;
    for (const auto& obj : lf.objects) {
        if (obj.kind == ObjectKind::Circle) continue;
        for (const auto& piece : object_segments(lf, obj)) {
            auto s = fig.seg(piece.a, piece.b);
            if (s && std::find(axes.begin(), axes.end(), *s) == axes.end()) axes.push_back(*s);
        }
    }
    for (const auto& t : fig.triangles()) {
        std::string ref = "triangle_" + t[0] + t[1] + t[2];
        bool fresh_tri = keep({t[0], t[1], t[2]});
        for (const auto& v : t)
            for (double deg : {60.0, -60.0, 90.0, -90.0, 180.0})
                if (fresh_tri) out.push_back(Rotate{ref, v, deg});
        for (const auto& ax : axes)
            if (fresh_tri || keep({ax[0], ax[1]})) out.push_back(Reflect{ref, {ax[0], ax[1]}});
    }
    return out;
}

struct Trial {
    Action action;
    std::optional<ExecutionResult> result;
    FactSet facts;
    bool closes = false;
    std::size_t new_facts = 0;
};

std::size_t count_new(const FactSet& before, const FactSet& after) {
    std::size_t n = 0;
    for (const auto& f : after.facts())
        if (!before.contains(f.key())) ++n;
    return n;
}

std::optional<Trial> simulate(const LogicForm& lf, const Action& action, const Goal& goal, const FactSet& base) {
    Trial t{action, std::nullopt, {}, false, 0};
    try {
        t.result = execute(lf, action);
        if (!validate(t.result->next_form).empty()) return std::nullopt;
        t.facts = derive_facts(t.result->next_form);
        Figure fig(t.result->next_form);
        t.closes = evaluate(fig, goal, t.facts).has_value();
    } catch (const Error&) {
        return std::nullopt;
    }
    t.new_facts = count_new(base, t.facts);
    return t;
}

}  // namespace

// ---- public API ------------------------------------------------------------------

FactSet derive_facts(const LogicForm& lf, const FactSet& seed) {
    FactSet fs = seed;
    Figure fig(lf);
    Engine(fig, fs).run();
    return fs;
}

std::string Goal::to_string() const {
    std::string s;
    for (const auto& g : kGoals)
        if (g.kind == kind) s = std::string(g.word);
    for (const auto& a : args) s += " " + a;
    return s;
}

Goal parse_goal(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string word;
    if (!(in >> word)) throw SchemaError("empty goal");
    std::vector<std::string> args;
    for (std::string a; in >> a;) args.push_back(a);
    for (const auto& g : kGoals) {
        if (g.word != word) continue;
        if (args.size() != g.arity)
            throw SchemaError("goal '" + word + "' takes " + std::to_string(g.arity) + " labels");
        for (const auto& a : args)
            if (!is_valid_label(a)) throw SchemaError("invalid label '" + a + "' in goal");
        return Goal{g.kind, args};
    }
    throw SchemaError("unknown goal '" + word + "'");
}

std::optional<Goal> goal_of(const LogicForm& lf) {
    auto it = lf.annotations.find("goal");
    if (it == lf.annotations.end()) return std::nullopt;
    return parse_goal(it->second);
}

std::optional<GoalAnswer> evaluate_goal(const LogicForm& lf, const Goal& goal, const FactSet& facts) {
    Figure fig(lf);
    return evaluate(fig, goal, facts);
}

std::string fresh_point_name(const LogicForm& lf) {
    static constexpr std::string_view order = "MNPQRSTUVWXYZEFGHIJKLOABCD";
    for (char c : order)
        if (!find_point(lf, std::string(1, c))) return std::string(1, c);
    for (int i = 1;; ++i) {
        auto name = "P" + std::to_string(i);
        if (!find_point(lf, name)) return name;
    }
}

std::vector<Candidate> rank_constructions(const LogicForm& lf, const Goal& goal, const FactSet& facts) {
    Figure fig(lf);
    if (evaluate(fig, goal, facts)) return {};

    std::vector<Trial> trials;
    std::set<std::string> seen;
    for (auto& a : generate(lf, fig, nullptr)) {
        if (!seen.insert(serialize_action(a)).second) continue;
        if (auto t = simulate(lf, a, goal, facts)) trials.push_back(std::move(*t));
    }

    std::vector<Candidate> out;
    for (const auto& t : trials) out.push_back({t.action, t.closes, false, t.new_facts});

    bool any_closes = std::any_of(trials.begin(), trials.end(), [](const Trial& t) { return t.closes; });
    if (!any_closes) {
        // Look one construction further, most promising first.
        std::vector<std::size_t> order(trials.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return trials[a].new_facts > trials[b].new_facts; });
        std::size_t budget = kMaxSecondLevelTrials;
        for (auto i : order) {
            if (budget == 0) break;
            const auto& first = trials[i];
            const auto& next = first.result->next_form;
            std::set<std::string> created(first.result->created.begin(), first.result->created.end());
            Figure fig2(next);
            auto follow = generate(next, fig2, &created);
            for (const auto& ref : first.result->created) {
                if (ref.rfind("line_", 0) != 0) continue;
                for (const auto& hit : auto_intersections(next, ref)) follow.push_back(LabelPoint{fresh_point_name(next), hit.point});
            }
            for (const auto& a : follow) {
                if (budget == 0) break;
                --budget;
                auto t2 = simulate(next, a, goal, first.facts);
                if (t2 && t2->closes) {
                    out[i].closes_in_two = true;
                    break;
                }
            }
        }
    }

    std::vector<std::string> keys;
    for (const auto& c : out) keys.push_back(serialize_action(c.action));
    std::vector<std::size_t> idx(out.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto &x = out[a], &y = out[b];
        return std::make_tuple(!x.closes_goal, !x.closes_in_two, -static_cast<long long>(x.new_facts), keys[a]) <
               std::make_tuple(!y.closes_goal, !y.closes_in_two, -static_cast<long long>(y.new_facts), keys[b]);
    });
    std::vector<Candidate> ranked;
    for (auto i : idx) ranked.push_back(out[i]);
    return ranked;
}

std::vector<Action> propose_construction(const LogicForm& lf, const Goal& goal, const FactSet& facts) {
    std::vector<Action> out;
    for (auto& c : rank_constructions(lf, goal, facts)) out.push_back(std::move(c.action));
    return out;
}

}  // namespace dyngeo

// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/errors.hpp"
#include "dyngeo/executor.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace dyngeo;
using testing::form;
using testing::square_form;
namespace oracle = testing::oracle;

namespace {

Vec2 pos(const LogicForm& lf, const std::string& n) { return position(lf, n); }

bool has_relation(const LogicForm& lf, RelationKind kind, std::vector<std::string> args) {
    return std::any_of(lf.relations.begin(), lf.relations.end(),
                       [&](const RelationDecl& r) { return r.kind == kind && r.args == args; });
}

}  // namespace

TEST_CASE("parse_action") {
    CHECK(parse_action(R"({"op":"draw_line","from":"A","to":"B"})") == Action{DrawLine{"A", "B"}});
    CHECK(parse_action(R"({"op":"rotate","object":"triangle_ABC","center":"B","degrees":90})") ==
          Action{Rotate{"triangle_ABC", "B", 90.0}});
    CHECK(parse_action(R"({"op":"reflect","object":"line_AB","axis":["P","Q"]})") ==
          Action{Reflect{"line_AB", {"P", "Q"}}});
    CHECK(parse_action(R"({"op":"translate","object":"line_AB","vector":[2,-1]})") ==
          Action{Translate{"line_AB", {2, -1}}});
    CHECK(parse_action(R"({"op":"label_point","name":"M","coordinates":[1.5,0]})") ==
          Action{LabelPoint{"M", {1.5, 0}}});
    CHECK(parse_action(R"({"op":"answer","type":"ratio","value":"4:2"})") == Action{Answer{Ratio::make(2, 1)}});
    CHECK(is_terminal(parse_action(R"({"op":"answer","type":"descriptor","value":"isosceles"})")));
}

TEST_CASE("parse_action is strict") {
    for (const char* bad : {
             R"({"op":"spin"})",
             R"({"op":"draw_line","from":"A"})",
             R"({"op":"draw_line","from":"A","to":"B","color":"red"})",
             R"({"op":"draw_line","from":"A","to":7})",
             R"({"op":"rotate","object":"triangle_ABC","center":"B","degrees":"90"})",
             R"({"op":"reflect","object":"line_AB","axis":["P"]})",
             R"({"op":"translate","object":"line_AB","vector":[1]})",
             R"({"op":"label_point","name":"1M","coordinates":[0,0]})",
             R"({"op":"answer","type":"ratio","value":"2:0"})",
             R"({"op":"answer","type":"shape","value":"x"})",
             R"(["op","draw_line"])",
             R"(not json)",
         }) {
        INFO(std::string(bad));
        CHECK_THROWS_AS(parse_action(bad), ActionSchemaError);
    }
}

TEST_CASE("serialize_action round trips") {
    std::vector<Action> actions{DrawLine{"A", "B"},         Reflect{"triangle_ABC", {"A", "C"}},
                                Rotate{"line_AB", "C", -45}, Translate{"polygon_ABCD", {0.5, -3}},
                                LabelPoint{"M", {1, 2}},     Answer{Numerical{30, "degree"}}};
    for (const auto& a : actions) CHECK(parse_action(serialize_action(a)) == a);
}

TEST_CASE("rotate a triangle of the square a quarter turn about B") {
    auto lf = square_form();
    auto res = execute(lf, Rotate{"triangle_ABC", "B", 90});
    const auto& next = res.next_form;
    REQUIRE(find_point(next, "A'"));
    REQUIRE(find_point(next, "C'"));
    CHECK_FALSE(find_point(next, "B'"));
    Vec2 a = pos(next, "A"), b = pos(next, "B"), a1 = pos(next, "A'");
    CHECK(std::abs(oracle::dist(b.x, b.y, a1.x, a1.y) - oracle::dist(b.x, b.y, a.x, a.y)) < 1e-9);
    CHECK(std::abs(oracle::angle_deg(a, b, a1) - 90.0) < 1e-9);
    CHECK(validate(next).empty());
    CHECK_FALSE(res.terminal);
    CHECK(std::find(res.created.begin(), res.created.end(), "A'") != res.created.end());

    auto copy = find_object(next, "polygon_A'BC'");
    REQUIRE(copy);
    REQUIRE(copy->origin);
    CHECK(copy->origin->op == OriginOp::Rotate);
    CHECK(copy->origin->from == std::vector<std::string>{"A", "B", "C"});
    CHECK(lf == square_form());  // input untouched
}

TEST_CASE("draw_line") {
    auto lf = square_form();
    auto once = execute(lf, DrawLine{"A", "C"}).next_form;
    REQUIRE(find_object(once, "line_AC"));
    CHECK(find_object(once, "line_AC")->auxiliary());
    CHECK(execute(once, DrawLine{"A", "C"}).next_form == once);
    CHECK(execute(once, DrawLine{"C", "A"}).next_form == once);
    CHECK_THROWS_AS(execute(lf, DrawLine{"A", "Q"}), UnknownLabel);

    SUBCASE("points on the new segment gain incidence relations") {
        auto line = form(R"({"points":[{"name":"A","x":0,"y":0},{"name":"B","x":4,"y":0},{"name":"M","x":2,"y":0},
            {"name":"P","x":1,"y":0}],"objects":[],"relations":[]})");
        auto next = execute(line, DrawLine{"A", "B"}).next_form;
        CHECK(has_relation(next, RelationKind::Midpoint, {"M", "A", "B"}));
        CHECK(has_relation(next, RelationKind::PointOnLine, {"P", "A", "B"}));
    }
}

TEST_CASE("translate by the zero vector") {
    auto lf = form(R"({"points":[{"name":"A","x":0.3,"y":-1},{"name":"B","x":2,"y":5}],
        "objects":[{"type":"line","points":["A","B"]}],"relations":[]})");
    auto next = execute(lf, Translate{"line_AB", {0, 0}}).next_form;
    CHECK(distance(pos(next, "A'"), pos(next, "A")) < 1e-12);
    CHECK(distance(pos(next, "B'"), pos(next, "B")) < 1e-12);
}

TEST_CASE("reflect twice reproduces the original coordinates") {
    auto lf = square_form();
    auto once = execute(lf, Reflect{"triangle_ABC", {"A", "C"}}).next_form;
    // A and C lie on the axis and keep their labels; B maps onto D's spot.
    CHECK(distance(pos(once, "B'"), pos(once, "D")) < 1e-9);
    auto twice = execute(once, Reflect{"triangle_AB'C", {"A", "C"}}).next_form;
    CHECK(distance(pos(twice, "B''"), pos(twice, "B")) < 1e-9);
    CHECK_THROWS_AS(execute(lf, Reflect{"triangle_ABC", {"A", "A"}}), DegenerateAxis);
    CHECK_THROWS_AS(execute(lf, Reflect{"triangle_ABQ", {"A", "C"}}), UnknownObject);
}

TEST_CASE("transforms preserve distances within the copy") {
    auto lf = form(R"({"points":[{"name":"A","x":0.1,"y":0.2},{"name":"B","x":3.7,"y":-1.1},{"name":"C","x":1.9,"y":2.4},
        {"name":"D","x":-2,"y":1}],"objects":[{"type":"polygon","points":["A","B","C","D"]}],"relations":[]})");
    std::vector<Action> actions{Rotate{"polygon_ABCD", "D", 37.5}, Reflect{"polygon_ABCD", {"A", "C"}},
                                Translate{"polygon_ABCD", {1.25, -3}}};
    for (const auto& a : actions) {
        auto res = execute(lf, a);
        const ObjectDecl& copy = res.next_form.objects.back();
        REQUIRE(copy.origin);
        const auto& from = copy.origin->from;
        for (std::size_t i = 0; i < from.size(); ++i)
            for (std::size_t j = i + 1; j < from.size(); ++j) {
                double before = distance(pos(lf, from[i]), pos(lf, from[j]));
                double after = distance(pos(res.next_form, copy.points[i]), pos(res.next_form, copy.points[j]));
                CHECK(std::abs(before - after) < 1e-9);
            }
    }
}

TEST_CASE("label_point") {
    auto lf = square_form();
    auto with_diagonals = execute(execute(lf, DrawLine{"A", "C"}).next_form, DrawLine{"B", "D"}).next_form;
    auto res = execute(with_diagonals, LabelPoint{"O", {0.5 + 4e-7, 0.5 - 3e-7}});
    CHECK(pos(res.next_form, "O") == Vec2{0.5, 0.5});  // snapped onto the crossing
    CHECK(has_relation(res.next_form, RelationKind::Midpoint, {"O", "A", "C"}));
    CHECK(has_relation(res.next_form, RelationKind::Midpoint, {"O", "B", "D"}));

    CHECK(execute(lf, LabelPoint{"A", {0, 0}}).next_form == lf);
    CHECK_THROWS_AS(execute(lf, LabelPoint{"A", {3, 3}}), NameCollision);
    auto free = execute(lf, LabelPoint{"P", {3, 3}}).next_form;
    CHECK(pos(free, "P") == Vec2{3, 3});
}

TEST_CASE("answer is terminal and leaves the form alone") {
    auto lf = square_form();
    auto res = execute(lf, Answer{Numerical{90, "degree"}});
    CHECK(res.terminal);
    REQUIRE(res.answer);
    CHECK(std::get<Numerical>(*res.answer).value == 90.0);
    CHECK(res.next_form == lf);
}

TEST_CASE("auto_intersections") {
    auto lf = execute(square_form(), DrawLine{"B", "D"}).next_form;
    lf = execute(lf, DrawLine{"A", "C"}).next_form;
    auto hits = auto_intersections(lf, "line_AC");
    REQUIRE(hits.size() == 1);
    // Center of the square from its corners.
    Vec2 center = 0.25 * (pos(lf, "A") + pos(lf, "B") + pos(lf, "C") + pos(lf, "D"));
    CHECK(distance(hits[0].point, center) < 1e-9);
    CHECK(hits[0].other == "line_BD");

    auto apart = form(R"({"points":[{"name":"A","x":0,"y":0},{"name":"B","x":1,"y":0},{"name":"C","x":0,"y":5},
        {"name":"D","x":1,"y":5}],"objects":[{"type":"line","points":["A","B"]},{"type":"line","points":["C","D"]}],
        "relations":[]})");
    CHECK(auto_intersections(apart, "line_CD").empty());

    auto ladder = form(R"({"points":[{"name":"A","x":0,"y":0},{"name":"B","x":0,"y":4},{"name":"C","x":2,"y":0},
        {"name":"D","x":2,"y":4},{"name":"P","x":-1,"y":1},{"name":"Q","x":3,"y":3}],
        "objects":[{"type":"line","points":["A","B"]},{"type":"line","points":["C","D"]},{"type":"line","points":["P","Q"]}],
        "relations":[]})");
    CHECK(auto_intersections(ladder, "line_PQ").size() == 2);

    SUBCASE("independent of the order of prior objects") {
        auto swapped = ladder;
        std::swap(swapped.objects[0], swapped.objects[1]);
        auto a = auto_intersections(ladder, "line_PQ"), b = auto_intersections(swapped, "line_PQ");
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(distance(a[i].point, b[i].point) < kSnapEps);
    }
}

TEST_CASE("circle pieces") {
    auto lf = form(R"({"points":[{"name":"O","x":0,"y":0},{"name":"A","x":-2,"y":0},{"name":"B","x":2,"y":0}],
        "objects":[{"type":"circle","center":"O","radius":1},{"type":"line","points":["A","B"]}],"relations":[]})");
    auto hits = auto_intersections(lf, "line_AB");
    REQUIRE(hits.size() == 2);
    auto rotated = execute(lf, Rotate{"circle_O", "A", 90}).next_form;
    auto copy = rotated.objects.back();
    CHECK(copy.kind == ObjectKind::Circle);
    CHECK(copy.radius == 1.0);
    CHECK(distance(pos(rotated, copy.center()), {-2, 2}) < 1e-9);
}

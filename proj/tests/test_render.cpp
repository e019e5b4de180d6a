// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/errors.hpp"
#include "dyngeo/executor.hpp"
#include "dyngeo/render.hpp"
#include "support.hpp"

#include <doctest.h>

#include <regex>

using namespace dyngeo;
using testing::form;
using testing::square_form;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
    return n;
}

std::string view_box(const std::string& svg) {
    std::smatch m;
    std::regex re(R"re(viewBox="([^"]*)")re");
    return std::regex_search(svg, m, re) ? m[1].str() : std::string{};
}

// The opening tag of the element with this id.
std::string element(const std::string& svg, const std::string& id) {
    auto at = svg.find("id=\"" + id + "\"");
    if (at == std::string::npos) return {};
    auto open = svg.rfind('<', at);
    return svg.substr(open, svg.find('>', at) - open + 1);
}

}  // namespace

TEST_CASE("single point") {
    auto lf = form(R"({"points":[{"name":"A","x":0,"y":0}],"objects":[],"relations":[]})");
    auto svg = render_svg(lf);
    CHECK(count(svg, "<circle") == 1);
    CHECK(count(svg, "<text") == 1);
    CHECK(svg.find(">A</text>") != std::string::npos);
    CHECK(svg.find("<svg") != std::string::npos);
}

TEST_CASE("empty form") {
    CHECK_THROWS_AS(render_svg(LogicForm{}), EmptyForm);
    CHECK_THROWS_AS(render_trajectory({}), EmptyForm);
}

TEST_CASE("deterministic output") {
    auto lf = square_form();
    CHECK(render_svg(lf) == render_svg(lf));
    CHECK(render_svg(parse_logic_form(serialize_logic_form(lf))) == render_svg(lf));
}

TEST_CASE("objects created by actions are dashed") {
    auto lf = execute(square_form(), Rotate{"polygon_ABCD", "A", 45}).next_form;
    auto svg = render_svg(lf);
    CHECK(count(svg, "stroke-dasharray") == 1);
    auto copy = element(svg, "obj-polygon-AB'C'D'");
    REQUIRE_FALSE(copy.empty());
    CHECK(copy.find("stroke-dasharray=\"6,4\"") != std::string::npos);
    CHECK(element(svg, "obj-polygon-ABCD").find("stroke-dasharray") == std::string::npos);
}

TEST_CASE("every point and object appears exactly once") {
    auto lf = form(R"({"points":[{"name":"O","x":0,"y":0},{"name":"A","x":2,"y":0},{"name":"B","x":0,"y":2},
        {"name":"C","x":-2,"y":0}],"objects":[{"type":"circle","center":"O","radius":2},{"type":"line","points":["A","C"]},
        {"type":"polygon","points":["A","B","C"]}],"relations":[]})");
    lf = execute(lf, DrawLine{"O", "B"}).next_form;
    auto svg = render_svg(lf);
    for (const auto& p : lf.points) {
        CHECK(count(svg, "id=\"pt-" + p.name + "\"") == 1);
        CHECK(count(svg, "id=\"lbl-" + p.name + "\"") == 1);
    }
    for (const char* id : {"obj-circle-O", "obj-line-AC", "obj-line-OB", "obj-polygon-ABC"})
        CHECK(count(svg, std::string("id=\"") + id + "\"") == 1);

    SUBCASE("canonical element order") {
        auto circle = svg.find("obj-circle-O"), line = svg.find("obj-line-AC"), line2 = svg.find("obj-line-OB"),
             poly = svg.find("obj-polygon-ABC"), first_pt = svg.find("id=\"pt-A\""), last_pt = svg.find("id=\"pt-O\""),
             first_lbl = svg.find("id=\"lbl-A\"");
        CHECK(circle < line);
        CHECK(line < line2);
        CHECK(line2 < poly);
        CHECK(poly < first_pt);
        CHECK(first_pt < last_pt);
        CHECK(last_pt < first_lbl);
    }
}

TEST_CASE("y axis points up") {
    auto lf = form(R"({"points":[{"name":"L","x":0,"y":0},{"name":"H","x":0,"y":10}],"objects":[],"relations":[]})");
    auto svg = render_svg(lf);
    std::regex cy_re(R"re(cy="([-0-9.e]+)")re");
    auto low = element(svg, "pt-L"), high = element(svg, "pt-H");
    std::smatch a, b;
    REQUIRE(std::regex_search(low, a, cy_re));
    REQUIRE(std::regex_search(high, b, cy_re));
    CHECK(std::stod(b[1]) < std::stod(a[1]));
}

TEST_CASE("bounding box includes circles") {
    auto lf = form(R"({"points":[{"name":"O","x":1,"y":1}],"objects":[{"type":"circle","center":"O","radius":2}],
        "relations":[]})");
    auto box = bounding_box(lf);
    CHECK(box.min_x == -1.0);
    CHECK(box.max_x == 3.0);
    CHECK(box.min_y == -1.0);
    CHECK(box.max_y == 3.0);
}

TEST_CASE("render_trajectory") {
    auto lf = square_form();
    auto one = render_trajectory({lf});
    REQUIRE(one.size() == 1);
    CHECK(one[0] == render_svg(lf));

    auto twin = render_trajectory({lf, lf});
    CHECK(twin[0] == twin[1]);

    auto far = execute(lf, LabelPoint{"Z", {40, 25}}).next_form;
    auto frames = render_trajectory({lf, far, lf});
    REQUIRE(frames.size() == 3);
    CHECK(view_box(frames[0]) == view_box(frames[1]));
    CHECK(view_box(frames[1]) == view_box(frames[2]));
    CHECK(view_box(frames[0]) == view_box(render_svg(far)));
    CHECK(view_box(frames[0]) != view_box(render_svg(lf)));
    CHECK(frames[0] != frames[1]);
}

TEST_CASE("style reaches the document") {
    RenderStyle style;
    style.stroke_width = 5;
    style.dash = "2,2";
    auto lf = execute(square_form(), DrawLine{"A", "C"}).next_form;
    auto svg = render_svg(lf, style);
    CHECK(svg.find("stroke-width=\"5\"") != std::string::npos);
    CHECK(svg.find("stroke-dasharray=\"2,2\"") != std::string::npos);
}

// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/render.hpp"

#include "dyngeo/errors.hpp"

#include <algorithm>
#include <cstdio>

namespace dyngeo {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    std::string s = buf;
    if (s == "-0") s = "0";
    return s;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string joined(const std::vector<std::string>& labels) {
    std::string s;
    for (const auto& l : labels) s += l;
    return s;
}

class Canvas {
public:
    Canvas(const BoundingBox& box, const RenderStyle& style) : style_(style) {
        double w = box.max_x - box.min_x;
        double h = box.max_y - box.min_y;
        // A single point (or a vertical/horizontal run) still needs an extent.
        double extent = std::max({w, h, 1.0});
        if (w <= 0) w = extent;
        if (h <= 0) h = extent;
        double cx = 0.5 * (box.min_x + box.max_x), cy = 0.5 * (box.min_y + box.max_y);
        double mw = w * (1 + 2 * style.margin), mh = h * (1 + 2 * style.margin);
        min_x_ = cx - 0.5 * mw;
        max_y_ = cy + 0.5 * mh;
        scale_ = style.canvas_width / mw;
        width_ = style.canvas_width;
        height_ = mh * scale_;
    }

    double sx(double x) const { return (x - min_x_) * scale_; }
    double sy(double y) const { return (max_y_ - y) * scale_; }
    double scale() const { return scale_; }
    double width() const { return width_; }
    double height() const { return height_; }

private:
    const RenderStyle& style_;
    double min_x_ = 0, max_y_ = 0, scale_ = 1, width_ = 0, height_ = 0;
};

int kind_rank(ObjectKind k) {
    switch (k) {
    case ObjectKind::Circle: return 0;
    case ObjectKind::Line: return 1;
    case ObjectKind::Polygon: return 2;
    }
    return 3;
}

}  // namespace

BoundingBox bounding_box(const LogicForm& lf) {
    if (lf.points.empty()) throw EmptyForm();
    BoundingBox box{lf.points[0].x, lf.points[0].y, lf.points[0].x, lf.points[0].y};
    auto grow = [&](double x, double y) {
        box.min_x = std::min(box.min_x, x);
        box.max_x = std::max(box.max_x, x);
        box.min_y = std::min(box.min_y, y);
        box.max_y = std::max(box.max_y, y);
    };
    for (const auto& p : lf.points) grow(p.x, p.y);
    for (const auto& obj : lf.objects) {
        if (obj.kind != ObjectKind::Circle) continue;
        const auto* c = find_point(lf, obj.center());
        if (!c) continue;
        grow(c->x - obj.radius, c->y - obj.radius);
        grow(c->x + obj.radius, c->y + obj.radius);
    }
    return box;
}

std::string render_svg(const LogicForm& lf, const RenderStyle& style) {
    return render_svg(lf, style, bounding_box(lf));
}

std::string render_svg(const LogicForm& lf, const RenderStyle& style, const BoundingBox& box) {
    if (lf.points.empty()) throw EmptyForm();
    Canvas canvas(box, style);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(canvas.width()) +
           "\" height=\"" + num(canvas.height()) + "\" viewBox=\"0 0 " + num(canvas.width()) + " " +
           num(canvas.height()) + "\">\n";
    out += "<g fill=\"none\" stroke=\"#000000\" stroke-width=\"" + num(style.stroke_width) + "\">\n";

    std::vector<const ObjectDecl*> objects;
    for (const auto& obj : lf.objects) objects.push_back(&obj);
    std::stable_sort(objects.begin(), objects.end(), [](const ObjectDecl* a, const ObjectDecl* b) {
        if (kind_rank(a->kind) != kind_rank(b->kind)) return kind_rank(a->kind) < kind_rank(b->kind);
        return a->points < b->points;
    });

    for (const auto* obj : objects) {
        std::string id = "obj-" + std::string(to_string(obj->kind)) + "-" + joined(obj->points);
        std::string dash = obj->auxiliary() ? " stroke-dasharray=\"" + style.dash + "\"" : "";
        switch (obj->kind) {
        case ObjectKind::Circle: {
            Vec2 c = position(lf, obj->center());
            out += "<circle id=\"" + escape(id) + "\" cx=\"" + num(canvas.sx(c.x)) + "\" cy=\"" + num(canvas.sy(c.y)) +
                   "\" r=\"" + num(obj->radius * canvas.scale()) + "\"" + dash + "/>\n";
            break;
        }
        case ObjectKind::Line: {
            Vec2 a = position(lf, obj->points[0]), b = position(lf, obj->points[1]);
            out += "<line id=\"" + escape(id) + "\" x1=\"" + num(canvas.sx(a.x)) + "\" y1=\"" + num(canvas.sy(a.y)) +
                   "\" x2=\"" + num(canvas.sx(b.x)) + "\" y2=\"" + num(canvas.sy(b.y)) + "\"" + dash + "/>\n";
            break;
        }
        case ObjectKind::Polygon: {
            std::string pts;
            for (const auto& label : obj->points) {
                Vec2 p = position(lf, label);
                if (!pts.empty()) pts += ' ';
                pts += num(canvas.sx(p.x)) + "," + num(canvas.sy(p.y));
            }
            out += "<polygon id=\"" + escape(id) + "\" points=\"" + pts + "\"" + dash + "/>\n";
            break;
        }
        }
    }
    out += "</g>\n";

    auto points = lf.points;
    std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    out += "<g fill=\"#000000\" stroke=\"none\">\n";
    for (const auto& p : points)
        out += "<circle id=\"pt-" + escape(p.name) + "\" cx=\"" + num(canvas.sx(p.x)) + "\" cy=\"" + num(canvas.sy(p.y)) +
               "\" r=\"" + num(style.point_radius) + "\"/>\n";
    out += "</g>\n";

    out += "<g font-family=\"sans-serif\" font-size=\"" + num(style.font_size) + "\" fill=\"#000000\">\n";
    for (const auto& p : points)
        out += "<text id=\"lbl-" + escape(p.name) + "\" x=\"" + num(canvas.sx(p.x) + style.point_radius + 2) +
               "\" y=\"" + num(canvas.sy(p.y) - style.point_radius - 2) + "\">" + escape(p.name) + "</text>\n";
    out += "</g>\n</svg>\n";
    return out;
}

std::vector<std::string> render_trajectory(const std::vector<LogicForm>& frames, const RenderStyle& style) {
    if (frames.empty()) throw EmptyForm();
    BoundingBox box = bounding_box(frames[0]);
    for (const auto& f : frames) {
        BoundingBox b = bounding_box(f);
        box.min_x = std::min(box.min_x, b.min_x);
        box.min_y = std::min(box.min_y, b.min_y);
        box.max_x = std::max(box.max_x, b.max_x);
        box.max_y = std::max(box.max_y, b.max_y);
    }
    std::vector<std::string> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(render_svg(f, style, box));
    return out;
}

}  // namespace dyngeo

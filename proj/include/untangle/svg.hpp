#ifndef UNTANGLE_SVG_HPP
#define UNTANGLE_SVG_HPP

#include <cstdio>
#include <string>
#include <vector>

#include "engine.hpp"

namespace untangle {

struct SvgStyle {
    double size = 480;   // canvas width and height in px
    double margin = 24;
    double marker = 5;   // half side of red squares, radius of blue circles
};

namespace detail {

inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

struct Frame {
    double x0, y0, x1, y1;
};

inline Frame frame_of(const PointSet& ps)
{
    const auto pts = ps.all_points();
    Frame f{0, 0, 1, 1};
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double x = pts[k].x.get_d(), y = pts[k].y.get_d();
        if (k == 0)
            f = {x, y, x, y};
        f.x0 = std::min(f.x0, x);
        f.y0 = std::min(f.y0, y);
        f.x1 = std::max(f.x1, x);
        f.y1 = std::max(f.y1, y);
    }
    if (f.x1 == f.x0)
        f.x1 = f.x0 + 1;
    if (f.y1 == f.y0)
        f.y1 = f.y0 + 1;
    return f;
}

} // namespace detail

// Reds are filled squares, blues hollow circles, y axis pointing up.
inline std::string render_svg(const Matching& M, const SvgStyle& st = {})
{
    const detail::Frame f = detail::frame_of(M.points());
    const double inner = st.size - 2 * st.margin;
    const double scale = inner / std::max(f.x1 - f.x0, f.y1 - f.y0);
    auto X = [&](const Point& p) { return detail::fmt(st.margin + (p.x.get_d() - f.x0) * scale); };
    auto Y = [&](const Point& p) {
        return detail::fmt(st.size - st.margin - (p.y.get_d() - f.y0) * scale);
    };
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt(st.size) +
                    "\" height=\"" + detail::fmt(st.size) + "\">\n";
    for (std::size_t i = 0; i < M.n(); ++i) {
        const Segment g = M.segment(i);
        s += "<line x1=\"" + X(g.red) + "\" y1=\"" + Y(g.red) + "\" x2=\"" + X(g.blue) + "\" y2=\"" +
             Y(g.blue) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    const std::string h = detail::fmt(st.marker), w = detail::fmt(2 * st.marker);
    for (const auto& p : M.points().reds()) {
        const double cx = st.margin + (p.x.get_d() - f.x0) * scale;
        const double cy = st.size - st.margin - (p.y.get_d() - f.y0) * scale;
        s += "<rect class=\"red\" x=\"" + detail::fmt(cx - st.marker) + "\" y=\"" +
             detail::fmt(cy - st.marker) + "\" width=\"" + w + "\" height=\"" + w +
             "\" fill=\"black\"/>\n";
    }
    for (const auto& p : M.points().blues())
        s += "<circle class=\"blue\" cx=\"" + X(p) + "\" cy=\"" + Y(p) + "\" r=\"" + h +
             "\" fill=\"white\" stroke=\"black\"/>\n";
    s += "</svg>\n";
    return s;
}

// One frame per state: steps + 1 documents.
inline std::vector<std::string> render_svg(const FlipSequence& seq, const SvgStyle& st = {})
{
    std::vector<std::string> frames;
    Matching cur = seq.start;
    frames.push_back(render_svg(cur, st));
    for (const Flip& f : seq.steps) {
        cur = apply_flip(cur, f);
        frames.push_back(render_svg(cur, st));
    }
    return frames;
}

} // namespace untangle

#endif

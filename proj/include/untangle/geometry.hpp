#ifndef UNTANGLE_GEOMETRY_HPP
#define UNTANGLE_GEOMETRY_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace untangle {

enum class Color { Red, Blue };

struct Point {
    Coord x;
    Coord y;
    Color color = Color::Red;

    bool same_place(const Point& o) const { return x == o.x && y == o.y; }
    bool operator==(const Point& o) const { return same_place(o) && color == o.color; }
};

inline Point red(Coord x, Coord y) { return Point{std::move(x), std::move(y), Color::Red}; }
inline Point blue(Coord x, Coord y) { return Point{std::move(x), std::move(y), Color::Blue}; }

struct Segment {
    Point red;
    Point blue;
};

enum class Orientation { CW = -1, Collinear = 0, CCW = 1 };

inline int cross_sign(const Coord& px, const Coord& py, const Coord& qx, const Coord& qy,
                      const Coord& rx, const Coord& ry)
{
    Coord d = (qx - px) * (ry - py) - (qy - py) * (rx - px);
    return sgn(d);
}

inline Orientation orientation(const Point& p, const Point& q, const Point& r)
{
    return static_cast<Orientation>(cross_sign(p.x, p.y, q.x, q.y, r.x, r.y));
}

inline int orient_sign(const Point& p, const Point& q, const Point& r)
{
    return cross_sign(p.x, p.y, q.x, q.y, r.x, r.y);
}

// Proper crossing from four orientation signs: o1 = (a,b,c), o2 = (a,b,d), o3 = (c,d,a), o4 = (c,d,b).
inline bool proper_cross(int o1, int o2, int o3, int o4)
{
    return o1 * o2 < 0 && o3 * o4 < 0;
}

inline bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d)
{
    if (a.same_place(c) || a.same_place(d) || b.same_place(c) || b.same_place(d))
        throw Error(ErrorCode::SharedEndpoint, "segments share an endpoint");
    return proper_cross(orient_sign(a, b, c), orient_sign(a, b, d), orient_sign(c, d, a),
                        orient_sign(c, d, b));
}

inline bool segments_cross(const Segment& s1, const Segment& s2)
{
    return segments_cross(s1.red, s1.blue, s2.red, s2.blue);
}

// Closed segments intersect, touching and collinear overlap included.
inline bool on_closed_segment(const Point& a, const Point& b, const Point& p)
{
    if (orient_sign(a, b, p) != 0)
        return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

inline bool closed_segments_meet(const Point& a, const Point& b, const Point& c, const Point& d)
{
    const int o1 = orient_sign(a, b, c), o2 = orient_sign(a, b, d);
    const int o3 = orient_sign(c, d, a), o4 = orient_sign(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0)
        return true;
    return on_closed_segment(a, b, c) || on_closed_segment(a, b, d) || on_closed_segment(c, d, a) ||
           on_closed_segment(c, d, b);
}

struct ValidationReport {
    bool valid = true;
    std::vector<std::string> violations;

    void add(std::string v)
    {
        valid = false;
        violations.push_back(std::move(v));
    }
};

inline std::string describe(const Point& p)
{
    return std::string(p.color == Color::Red ? "red(" : "blue(") + to_string(p.x) + "," +
           to_string(p.y) + ")";
}

inline ValidationReport check_general_position(const std::vector<Point>& pts, bool red_on_line)
{
    ValidationReport rep;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (pts[i].same_place(pts[j]))
                rep.add("coincident points " + describe(pts[i]) + " " + describe(pts[j]));
    if (red_on_line) {
        for (const auto& p : pts) {
            if (p.color == Color::Red && p.y != 0)
                rep.add("red point off the line: " + describe(p));
            if (p.color == Color::Blue && p.y <= 0)
                rep.add("blue point not above the line: " + describe(p));
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const auto& a = pts[i];
                const auto& b = pts[j];
                const auto& c = pts[k];
                if (a.color == b.color && b.color == c.color)
                    continue;
                if (orient_sign(a, b, c) == 0)
                    rep.add("collinear mixed triple " + describe(a) + " " + describe(b) + " " +
                            describe(c));
            }
    return rep;
}

enum class TriangleLocation { Inside, OnBoundary, Outside };

inline TriangleLocation point_in_triangle(const Point& p, const Point& a, const Point& b,
                                          const Point& c)
{
    const int o = orient_sign(a, b, c);
    if (o == 0)
        throw Error(ErrorCode::DegenerateTriangle, "triangle vertices are collinear");
    const int s1 = orient_sign(a, b, p) * o;
    const int s2 = orient_sign(b, c, p) * o;
    const int s3 = orient_sign(c, a, p) * o;
    if (s1 < 0 || s2 < 0 || s3 < 0)
        return TriangleLocation::Outside;
    if (s1 == 0 || s2 == 0 || s3 == 0)
        return TriangleLocation::OnBoundary;
    return TriangleLocation::Inside;
}

// Monotone chain; counter-clockwise, collinear points dropped, duplicates merged.
inline std::vector<Point> convex_hull(std::vector<Point> pts)
{
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point& a, const Point& b) { return a.same_place(b); }),
              pts.end());
    if (pts.size() <= 2)
        return pts;
    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && orient_sign(h[k - 2], h[k - 1], pts[i]) <= 0)
            --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && orient_sign(h[k - 2], h[k - 1], pts[i]) <= 0)
            --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

// p inside or on the boundary of a convex CCW polygon (1, 2 or more vertices).
inline bool in_closed_hull(const std::vector<Point>& hull, const Point& p)
{
    if (hull.empty())
        return false;
    if (hull.size() == 1)
        return hull[0].same_place(p);
    if (hull.size() == 2)
        return on_closed_segment(hull[0], hull[1], p);
    for (std::size_t i = 0; i < hull.size(); ++i)
        if (orient_sign(hull[i], hull[(i + 1) % hull.size()], p) < 0)
            return false;
    return true;
}

// Closed convex hulls intersect.
inline bool hulls_meet(const std::vector<Point>& a, const std::vector<Point>& b)
{
    if (a.empty() || b.empty())
        return false;
    for (const auto& p : a)
        if (in_closed_hull(b, p))
            return true;
    for (const auto& p : b)
        if (in_closed_hull(a, p))
            return true;
    if (a.size() < 2 || b.size() < 2)
        return false;
    const std::size_t na = a.size() == 2 ? 1 : a.size();
    const std::size_t nb = b.size() == 2 ? 1 : b.size();
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            if (closed_segments_meet(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()]))
                return true;
    return false;
}

inline bool in_convex_position(const std::vector<Point>& pts)
{
    return convex_hull(pts).size() == pts.size();
}

} // namespace untangle

#endif

#ifndef UNTANGLE_REDUCTION_HPP
#define UNTANGLE_REDUCTION_HPP

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <map>
#include <sstream>
#include <unordered_map>

#include "gadgets.hpp"

namespace untangle {

// ---------------------------------------------------------------- formulas

enum class Polarity { Positive, Negative };

struct RpmClause {
    Polarity polarity = Polarity::Positive;
    std::array<int, 3> vars{};
    int level = 1;
};

struct RpmFormula {
    std::vector<std::string> variables;
    std::vector<RpmClause> clauses;

    std::size_t v() const { return variables.size(); }
    std::size_t c() const { return clauses.size(); }
};

// First line: variable names left to right. Then one clause per line: "+|- a b c @level".
inline RpmFormula parse_formula(const std::string& text)
{
    RpmFormula f;
    std::istringstream in(text);
    std::string line;
    bool have_vars = false;
    std::map<std::string, int> index;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos)
            line.erase(h);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (!have_vars) {
            for (const auto& t : tok) {
                if (!index.emplace(t, static_cast<int>(f.variables.size())).second)
                    throw Error(ErrorCode::ParseError, where + "duplicate variable " + t);
                f.variables.push_back(t);
            }
            have_vars = true;
            continue;
        }
        if (tok.size() != 5 || (tok[0] != "+" && tok[0] != "-") || tok[4].size() < 2 || tok[4][0] != '@')
            throw Error(ErrorCode::ParseError, where + "expected '+|- a b c @level'");
        RpmClause c;
        c.polarity = tok[0] == "+" ? Polarity::Positive : Polarity::Negative;
        for (int k = 0; k < 3; ++k) {
            auto it = index.find(tok[1 + k]);
            if (it == index.end())
                throw Error(ErrorCode::ParseError, where + "unknown variable " + tok[1 + k]);
            c.vars[k] = it->second;
        }
        if (!(c.vars[0] < c.vars[1] && c.vars[1] < c.vars[2]))
            throw Error(ErrorCode::ParseError, where + "clause variables must be distinct and left to right");
        try {
            std::size_t used = 0;
            c.level = std::stoi(tok[4].substr(1), &used);
            if (used != tok[4].size() - 1 || c.level < 1)
                throw std::invalid_argument("level");
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, where + "bad level " + tok[4]);
        }
        f.clauses.push_back(c);
    }
    if (!have_vars)
        throw Error(ErrorCode::ParseError, "missing variable line");
    return f;
}

inline std::string format_formula(const RpmFormula& f)
{
    std::string s;
    for (std::size_t i = 0; i < f.v(); ++i)
        s += (i ? " " : "") + f.variables[i];
    s += "\n";
    for (const auto& c : f.clauses) {
        s += c.polarity == Polarity::Positive ? "+" : "-";
        for (int k : c.vars)
            s += " " + f.variables[k];
        s += " @" + std::to_string(c.level) + "\n";
    }
    return s;
}

inline bool evaluate(const RpmFormula& f, const std::vector<bool>& a)
{
    for (const auto& c : f.clauses) {
        bool sat = false;
        for (int k : c.vars)
            sat = sat || (c.polarity == Polarity::Positive ? a[k] : !a[k]);
        if (!sat)
            return false;
    }
    return true;
}

inline bool brute_force_satisfiable(const RpmFormula& f)
{
    if (f.v() > 24)
        throw Error(ErrorCode::InvalidArgument, "too many variables for brute force");
    for (unsigned long m = 0; m < (1ul << f.v()); ++m) {
        std::vector<bool> a(f.v());
        for (std::size_t i = 0; i < f.v(); ++i)
            a[i] = (m >> i) & 1;
        if (evaluate(f, a))
            return true;
    }
    return false;
}

// ---------------------------------------------------------------- embedding

// Clause edges[j][i] is the x of input i. base/scale place the clause template in the
// clause's own half-plane (absolute y), i.e. mirrored for negative clauses.
struct Embedding {
    std::vector<Rect> variables;
    std::vector<Rect> clauses;
    std::vector<std::array<Coord, 3>> edges;
    std::vector<Coord> base, scale;
};

namespace detail {

inline bool rects_meet(const Rect& a, const Rect& b)
{
    return a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
}

inline std::string rect_str(const Rect& r)
{
    return "[" + to_string(r.x0) + "," + to_string(r.x1) + "]x[" + to_string(r.y0) + "," +
           to_string(r.y1) + "]";
}

} // namespace detail

// Conventions: (i) axis-parallel non-overlapping closed rectangles, (ii) variable centroids on
// the x-axis, (iii) positive clauses above the axis and negative ones below, (iv) vertical
// edges that meet no other rectangle.
inline ValidationReport validate_embedding(const RpmFormula& f, const Embedding& e)
{
    ValidationReport rep;
    if (e.variables.size() != f.v() || e.clauses.size() != f.c() || e.edges.size() != f.c()) {
        rep.add("embedding sizes do not match the formula");
        return rep;
    }
    std::vector<Rect> all(e.variables);
    all.insert(all.end(), e.clauses.begin(), e.clauses.end());
    auto name = [&](std::size_t k) {
        return k < f.v() ? "variable " + f.variables[k] : "clause " + std::to_string(k - f.v());
    };
    for (std::size_t k = 0; k < all.size(); ++k)
        if (all[k].x1 <= all[k].x0 || all[k].y1 <= all[k].y0)
            rep.add("(i) " + name(k) + " is degenerate " + detail::rect_str(all[k]));
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b)
            if (detail::rects_meet(all[a], all[b]))
                rep.add("(i) " + name(a) + " overlaps " + name(b));
    for (std::size_t i = 0; i < f.v(); ++i) {
        const Rect& r = e.variables[i];
        if (r.y0 + r.y1 != 0)
            rep.add("(ii) centroid of variable " + f.variables[i] + " is off the x-axis");
        if (i > 0 && !(e.variables[i - 1].x1 < r.x0))
            rep.add("(ii) variable " + f.variables[i] + " is not right of its predecessor");
    }
    for (std::size_t j = 0; j < f.c(); ++j) {
        const Rect& r = e.clauses[j];
        const bool pos = f.clauses[j].polarity == Polarity::Positive;
        if (pos ? !(r.y0 > 0) : !(r.y1 < 0))
            rep.add(std::string("(iii) ") + (pos ? "positive" : "negative") + " clause " +
                    std::to_string(j) + " is on the wrong side of the axis");
        for (int i = 0; i < 3; ++i) {
            const Coord& x = e.edges[j][i];
            const std::size_t vi = static_cast<std::size_t>(f.clauses[j].vars[i]);
            const Rect& vr = e.variables[vi];
            const std::string en = "(iv) edge " + std::to_string(j) + "." + std::to_string(i);
            if (!(vr.x0 < x && x < vr.x1) || !(r.x0 <= x && x <= r.x1)) {
                rep.add(en + " is not inside both of its rectangles");
                continue;
            }
            if (i > 0 && !(e.edges[j][i - 1] < x))
                rep.add(en + " is not right of the previous input");
            const Coord lo = pos ? vr.y1 : r.y1, hi = pos ? r.y0 : vr.y0;
            for (std::size_t k = 0; k < all.size(); ++k) {
                if (k == vi || k == f.v() + j)
                    continue;
                const Rect& o = all[k];
                if (o.x0 <= x && x <= o.x1 && o.y0 <= hi && lo <= o.y1)
                    rep.add(en + " crosses " + name(k));
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------- layout

namespace detail {

struct SlotRef {
    int clause;
    int input; // 0 left (blue bottom), 1 middle, 2 right (red bottom)
};

struct SideSlots {
    // per variable, left to right: red bottoms (inner first), then blue bottoms (outer first)
    std::vector<std::vector<SlotRef>> red, blue;
};

inline std::array<SideSlots, 2> collect_slots(const RpmFormula& f)
{
    std::array<SideSlots, 2> s;
    for (auto& side : s) {
        side.red.assign(f.v(), {});
        side.blue.assign(f.v(), {});
    }
    for (std::size_t j = 0; j < f.c(); ++j) {
        const auto& c = f.clauses[j];
        SideSlots& side = s[c.polarity == Polarity::Positive ? 0 : 1];
        for (int i = 0; i < 3; ++i)
            (i == 0 ? side.blue : side.red)[c.vars[i]].push_back(SlotRef{static_cast<int>(j), i});
    }
    for (auto& side : s)
        for (std::size_t v = 0; v < f.v(); ++v) {
            auto lvl = [&](const SlotRef& r) { return f.clauses[r.clause].level; };
            std::stable_sort(side.red[v].begin(), side.red[v].end(),
                             [&](const SlotRef& a, const SlotRef& b) { return lvl(a) < lvl(b); });
            std::stable_sort(side.blue[v].begin(), side.blue[v].end(),
                             [&](const SlotRef& a, const SlotRef& b) { return lvl(a) > lvl(b); });
        }
    return s;
}

inline double dbl(const Coord& c) { return c.get_d(); }

inline Coord snap(double v, long grid)
{
    return make_coord(std::llround(v * static_cast<double>(grid)), grid);
}

struct DFrame {
    double x0, y0, sx, sy, c;
};

inline DFrame dframe(double xa, double xb, double xc, double y0, double sy)
{
    const double t = (xb - xa) / (xc - xa);
    const double c = (2 * t - 1) / (20 * (1 - t));
    return DFrame{xa, y0, (xc - xa) * (1 + 20 * c) / 20, sy, c};
}

// Template points of the clause and of its k-padding.
inline std::vector<Point> template_points(std::size_t k)
{
    const ClauseTemplate t;
    std::vector<Point> pts{t.r4, t.b5, t.b7, t.r6, t.b6, t.r8, t.b8};
    const PaddingGadget p = build_padding(k, t.r4, t.b7);
    pts.insert(pts.end(), p.reds.begin(), p.reds.end());
    pts.insert(pts.end(), p.blues.begin(), p.blues.end());
    return pts;
}

} // namespace detail

// Layout constants. Variable tops sit `flat` template units below a clause's base line; far
// ends are placed at template slope `slope` (`slope_right` for the right input).
struct LayoutConstants {
    double flat = 60;
    double slope = 1.0 / 45;
    double slope_right = 1.0 / 40;
    double nest = 2;       // an outer slot's gap is at least nest times the inner one's
    double convex = 1.25;  // margin on the slope decrease along the tops of a group
    double lift = 1.25;    // clause base above everything under it, multiplicative
    double spacing = 1;    // least gap between variable rectangles
    double t_lo = 0.25;    // middle input position within a clause, as a fraction of its width
    double t_hi = 0.75;
    double min_width = 2;
    unsigned jitter = 0;   // nonzero: seed for small rational shifts that break coincidences
    double margin = 0.25;  // free width between the two slot groups, relative to the larger
};

inline Coord variable_half_height(std::size_t i, std::size_t v)
{
    return make_coord(static_cast<long>(2 * v + i), static_cast<long>(2 * v));
}

// Auto-derived embedding for k-padded clauses. Throws AssemblyAuditFailed if the slot gaps
// cannot be balanced.
inline Embedding derive_embedding(const RpmFormula& f, std::size_t k, const LayoutConstants& K = {})
{
    using namespace detail;
    const std::size_t v = f.v();
    if (v == 0)
        throw Error(ErrorCode::InvalidArgument, "formula has no variables");
    const auto slots = collect_slots(f);
    const auto tpts = template_points(k);
    const ClauseTemplate T;
    const double topx[3] = {0, 10, 20}, topy[3] = {20, 20, 273.0 / 8};
    std::vector<double> h(v);
    for (std::size_t i = 0; i < v; ++i)
        h[i] = dbl(variable_half_height(i, v));

    std::vector<double> W(v, K.min_width), L(v), D(v, K.spacing);
    // gap[j][i]: own gap of clause j input i; eff: after nesting
    std::vector<std::array<double, 3>> gap(f.c(), {1, 1, 1}), eff(f.c()), xs(f.c());
    std::vector<DFrame> fr(f.c());
    std::vector<double> top(f.c());
    std::vector<std::array<double, 3>> ytop(f.c(), {0, 0, 0});

    // per side and variable: summed gaps, and the outermost top and its incoming slope
    struct GroupEnd {
        double sum = 0, y = 0, slope = 0;
    };
    std::array<std::vector<std::array<GroupEnd, 2>>, 2> ends;
    auto place = [&]() {
        for (std::size_t i = 0; i < v; ++i)
            L[i] = i == 0 ? 0 : L[i - 1] + W[i - 1] + D[i - 1];
        for (int sd = 0; sd < 2; ++sd)
            ends[sd].assign(v, {});
        for (int sd = 0; sd < 2; ++sd)
            for (std::size_t i = 0; i < v; ++i) {
                const auto& side = slots[sd];
                // gaps grow outward and keep the tops in convex position
                auto walk = [&](auto first, auto last, double x, double dir, GroupEnd& end) {
                    double prev = 0, py = h[i], slope_in = 0;
                    for (auto it = first; it != last; ++it) {
                        double g = std::max(gap[it->clause][it->input], K.nest * prev);
                        const double y = ytop[it->clause][it->input];
                        if (prev > 0 && slope_in > 0 && y > py)
                            g = std::max(g, K.convex * (y - py) / slope_in);
                        if (y > py)
                            slope_in = (y - py) / g;
                        eff[it->clause][it->input] = g;
                        x += dir * g;
                        xs[it->clause][it->input] = x;
                        prev = g;
                        py = std::max(py, y);
                        end.sum += g;
                    }
                    end.y = py;
                    end.slope = slope_in;
                };
                walk(side.red[i].begin(), side.red[i].end(), L[i], 1, ends[sd][i][0]);
                walk(side.blue[i].rbegin(), side.blue[i].rend(), L[i] + W[i], -1, ends[sd][i][1]);
            }
    };

    std::vector<std::size_t> order(f.c());
    for (std::size_t j = 0; j < f.c(); ++j)
        order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return f.clauses[a].level < f.clauses[b].level;
    });

    auto frames = [&]() {
        for (std::size_t j : order) {
            const auto& c = f.clauses[j];
            const double xa = xs[j][0], xc = xs[j][2];
            double under = 0;
            for (std::size_t i = 0; i < v; ++i)
                if (L[i] <= xc && xa <= L[i] + W[i])
                    under = std::max(under, h[i]);
            for (std::size_t o = 0; o < f.c(); ++o)
                if (o != j && f.clauses[o].polarity == c.polarity && f.clauses[o].level < c.level &&
                    xs[o][0] <= xc && xa <= xs[o][2])
                    under = std::max(under, top[o]);
            double hv = 0;
            for (int i = 0; i < 3; ++i)
                hv = std::max(hv, h[c.vars[i]]);
            const double y0 = K.lift * under + 0.5;
            fr[j] = dframe(xa, xs[j][1], xc, y0, (y0 - hv) / K.flat);
            double ymax = 0;
            for (const auto& p : tpts)
                ymax = std::max(ymax, dbl(p.y) / (1 + fr[j].c * dbl(p.x)));
            top[j] = y0 + fr[j].sy * ymax;
            for (int i = 0; i < 3; ++i)
                ytop[j][i] = y0 + fr[j].sy * topy[i] / (1 + fr[j].c * topx[i]);
        }
    };

    // template slope of a far end at horizontal offset g from input i of clause j
    auto slope = [&](std::size_t j, int i, double g) {
        const DFrame& F = fr[j];
        const double X = xs[j][i] + (i == 0 ? g : -g);
        const double Y = h[f.clauses[j].vars[i]];
        const double u = (X - F.x0) / F.sx, w = (Y - F.y0) / F.sy, d = 1 - F.c * u;
        return std::fabs(u / d - topx[i]) / (topy[i] - w / d);
    };

    double prev_total = -1;
    for (int iter = 0; iter < 400; ++iter) {
        place();
        frames();
        for (std::size_t j = 0; j < f.c(); ++j)
            for (int i = 0; i < 3; ++i) {
                const double target = i == 2 ? K.slope_right : K.slope;
                double lo = 0, hi = 1e-3;
                while (slope(j, i, hi) < target) {
                    hi *= 2;
                    if (hi > 1e12)
                        throw Error(ErrorCode::AssemblyAuditFailed, "layout: far-end slope unreachable");
                }
                for (int b = 0; b < 80; ++b) {
                    const double mid = (lo + hi) / 2;
                    (slope(j, i, mid) < target ? lo : hi) = mid;
                }
                gap[j][i] = hi;
            }
        place();
        double total = 0;
        for (std::size_t i = 0; i < v; ++i) {
            // red-bottom slots of both sides stay left of all blue-bottom slots
            const double rs = std::max(ends[0][i][0].sum, ends[1][i][0].sum);
            const double bs = std::max(ends[0][i][1].sum, ends[1][i][1].sum);
            double need = rs + bs + K.margin * std::max(rs, bs) + 0.5;
            for (int sd = 0; sd < 2; ++sd) {
                const GroupEnd& a = ends[sd][i][0];
                const GroupEnd& b = ends[sd][i][1];
                if (a.sum > 0 && b.sum > 0 && a.slope > 0 && b.slope > 0)
                    need = std::max(need, a.sum + b.sum +
                                              K.convex * std::fabs(a.y - b.y) / std::min(a.slope, b.slope));
            }
            W[i] = std::max(K.min_width, need);
            total += W[i];
        }
        // widen the spacing on the short side of a lopsided clause
        place();
        for (std::size_t j = 0; j < f.c(); ++j) {
            const auto& cv = f.clauses[j].vars;
            const double l = xs[j][1] - xs[j][0], r = xs[j][2] - xs[j][1];
            double need = 0;
            int from = 0, to = 0;
            if (l < K.t_lo / (1 - K.t_lo) * r) {
                need = K.t_lo / (1 - K.t_lo) * r - l;
                from = cv[0];
                to = cv[1];
            } else if (r < (1 - K.t_hi) / K.t_hi * l) {
                need = (1 - K.t_hi) / K.t_hi * l - r;
                from = cv[1];
                to = cv[2];
            }
            for (int q = from; q < to; ++q)
                D[q] += need / (to - from);
        }
        for (std::size_t i = 0; i + 1 < v; ++i)
            total += D[i];
        if (!std::isfinite(total) || total > 1e12)
            throw Error(ErrorCode::AssemblyAuditFailed, "layout: slot gaps do not settle for this nesting");
        if (std::fabs(total - prev_total) <= 1e-12 * total)
            break;
        prev_total = total;
    }
    place();
    frames();

    // exact, on a 1/64 grid
    Embedding e;
    std::mt19937 rng(K.jitter);
    auto shake = [&](long den) {
        return K.jitter ? make_coord(static_cast<long>(rng() % 16), den) : Coord(0);
    };
    Coord x = 0;
    for (std::size_t i = 0; i < v; ++i) {
        const Coord w = snap(W[i], 64) + shake(512);
        const Coord hh = variable_half_height(i, v) + shake(static_cast<long>(1024 * v));
        e.variables.push_back(Rect{x, -hh, x + w, hh});
        if (i + 1 < v)
            x += w + snap(D[i], 64) + shake(512);
    }
    e.edges.assign(f.c(), {});
    for (const auto& side : slots)
        for (std::size_t i = 0; i < v; ++i) {
            Coord p = e.variables[i].x0;
            for (const auto& s : side.red[i]) {
                p += snap(eff[s.clause][s.input], 64) + shake(4096);
                e.edges[s.clause][s.input] = p;
            }
            p = e.variables[i].x1;
            for (auto it = side.blue[i].rbegin(); it != side.blue[i].rend(); ++it) {
                p -= snap(eff[it->clause][it->input], 64) + shake(4096);
                e.edges[it->clause][it->input] = p;
            }
        }
    e.base.assign(f.c(), 0);
    e.scale.assign(f.c(), 0);
    e.clauses.assign(f.c(), Rect{});
    for (std::size_t j : order) {
        const long grid = 1 << 10;
        e.base[j] = snap(fr[j].y0, 64);
        e.scale[j] = snap(fr[j].sy, grid);
        if (e.scale[j] <= 0)
            e.scale[j] = make_coord(1, grid);
        const Frame F = clause_frame(e.edges[j][0], e.edges[j][1], e.edges[j][2], e.base[j], e.scale[j]);
        Coord lo = F.map(T.r6).y, hi = lo;
        for (const auto& p : tpts) {
            const Coord y = F.map(p).y;
            lo = std::min(lo, y);
            hi = std::max(hi, y);
        }
        if (f.clauses[j].polarity == Polarity::Positive)
            e.clauses[j] = Rect{e.edges[j][0], lo, e.edges[j][2], hi};
        else
            e.clauses[j] = Rect{e.edges[j][0], -hi, e.edges[j][2], -lo};
    }
    return e;
}

// ---------------------------------------------------------------- assembly

struct ClauseSegments {
    int left, mid, horiz1, right, horiz2; // segment ids in M_Phi
    std::vector<int> padding;
};

struct AuditEntry {
    std::string step;
    std::string constraint;
    bool ok;
};

struct MPhi {
    RpmFormula formula;
    Embedding embedding;
    std::size_t k = 0;
    Matching matching;
    std::vector<std::array<int, 3>> variable_segments; // diagonal, rm-BR, TL-bm
    std::vector<ClauseSegments> clause_segments;
    std::vector<GadgetReport> reports;
    std::vector<AuditEntry> audits;
    std::size_t max_bits = 0;

    bool audits_ok() const
    {
        return std::all_of(audits.begin(), audits.end(), [](const AuditEntry& a) { return a.ok; });
    }
    // Expected point count: 6 per variable, 10 + 2k per clause.
    std::size_t expected_points() const { return 6 * formula.v() + formula.c() * (10 + 2 * k); }
};

inline std::size_t padding_size(const RpmFormula& f, const Coord& alpha)
{
    if (alpha < 1)
        throw Error(ErrorCode::InvalidArgument, "alpha must be at least 1");
    const Coord a = alpha * Coord(static_cast<long>(f.v() + 5 * f.c()));
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    return q.get_ui() + 1;
}

namespace detail {

inline Point mirror(const Point& p) { return Point{p.x, -p.y, p.color}; }

struct SideGeometry {
    // world coordinates: the clause's half-plane seen as the upper one
    Point TL, TR, mid; // mid: rm seen from this side
    Coord xl, xr, h;
};

inline Coord cup_y(const Coord& x, const Coord& xl, const Coord& xr, const Coord& h)
{
    const Coord W = xr - xl;
    return h - h / 2 * (x - xl) * (xr - x) / (W * W);
}

struct Builder {
    std::vector<Point> reds, blues;

    int seg(const Point& r, const Point& b)
    {
        reds.push_back(r);
        blues.push_back(b);
        return static_cast<int>(reds.size()) - 1;
    }
};

// All segments (as red/blue point pairs) met in any configuration reachable from M.
inline std::set<std::pair<std::string, std::string>> reachable_segments(const Matching& M,
                                                                       std::uint64_t budget)
{
    std::set<std::pair<std::string, std::string>> out;
    std::unordered_map<std::string, char> seen;
    std::vector<Matching> stack{M};
    seen.emplace(M.key(), 1);
    while (!stack.empty()) {
        Matching cur = std::move(stack.back());
        stack.pop_back();
        if (seen.size() > budget)
            throw Error(ErrorCode::BudgetExhausted, "reachable segment scan");
        for (std::size_t i = 0; i < cur.n(); ++i)
            out.emplace(describe(cur.red(i)), describe(cur.blue_of(i)));
        for (const Flip& fl : available_flips(cur)) {
            Matching nx = apply_flip(cur, fl);
            if (seen.emplace(nx.key(), 1).second)
                stack.push_back(std::move(nx));
        }
    }
    return out;
}

} // namespace detail

struct AssemblyOptions {
    bool independence_audit = true;
    bool build_only = false; // stop after the general position audit
    std::uint64_t budget = 2'000'000;
};

// The padded clause/variable matching for formula f on embedding e. Runs every gadget audit
// on the placed gadgets; `audits` lists them all. Throws AssemblyAuditFailed on the first
// failed audit unless `nothrow`.
inline MPhi assemble_m_phi_k(const RpmFormula& f, const Embedding& e, std::size_t k,
                             const AssemblyOptions& opt = {}, bool nothrow = false)
{
    using namespace detail;
    const ValidationReport vr = validate_embedding(f, e);
    if (!vr.valid)
        throw Error(ErrorCode::AssemblyAuditFailed, "embedding: " + vr.violations.front());
    const std::size_t v = f.v();
    const auto slots = collect_slots(f);
    std::vector<AuditEntry> audits;
    std::vector<GadgetReport> reports;
    auto audit = [&](const std::string& step, const std::string& what, bool ok) {
        audits.push_back(AuditEntry{step, what, ok});
    };

    Builder B;
    std::vector<VariableGadget> vars;
    std::vector<std::array<int, 3>> vsegs;
    for (std::size_t i = 0; i < v; ++i) {
        const VariableGadget g = build_variable_gadget(e.variables[i]);
        vars.push_back(g);
        vsegs.push_back({B.seg(g.BL, g.TR), B.seg(g.rm, g.BR), B.seg(g.TL, g.bm)});
        GadgetReport r = variable_report(g);
        r.id = "variable " + f.variables[i];
        audit("step 1", r.id + ": two sequences of length 1, distinct ends", r.verdict);
        reports.push_back(r);
    }
    auto side_geom = [&](std::size_t i, int side) {
        const VariableGadget& g = vars[i];
        if (side == 0)
            return SideGeometry{g.TL, g.TR, g.rm, g.TL.x, g.TR.x, g.TL.y};
        return SideGeometry{mirror(g.BL), mirror(g.BR), mirror(g.bm), g.TL.x, g.TR.x, g.TL.y};
    };
    auto to_world = [](const Point& p, int side) { return side == 0 ? p : mirror(p); };

    // clause gadgets in world coordinates; bottoms on the cup of each variable
    std::vector<ClauseGadget> cg;
    std::vector<std::array<Point, 3>> bottoms(f.c());
    std::vector<int> side_of(f.c());
    for (std::size_t j = 0; j < f.c(); ++j) {
        const auto& c = f.clauses[j];
        side_of[j] = c.polarity == Polarity::Positive ? 0 : 1;
        try {
            cg.push_back(build_clause_gadget(e.edges[j][0], e.edges[j][1], e.edges[j][2], e.base[j],
                                             e.scale[j], k));
            audit("step 1", "clause " + std::to_string(j) + ": OR constraints and r8 placement", true);
        } catch (const Error& err) {
            throw Error(ErrorCode::AssemblyAuditFailed, std::string("step 1: ") + err.what());
        }
        for (int i = 0; i < 3; ++i) {
            const SideGeometry sg = side_geom(c.vars[i], side_of[j]);
            const Coord& x = e.edges[j][i];
            const Coord y = cup_y(x, sg.xl, sg.xr, sg.h);
            bottoms[j][i] = i == 0 ? blue(x, y) : red(x, y);
        }
    }
    std::vector<ClauseSegments> csegs;
    for (std::size_t j = 0; j < f.c(); ++j) {
        const int s = side_of[j];
        const ClauseGadget& g = cg[j];
        auto W = [&](const Point& p) { return to_world(p, s); };
        ClauseSegments cs;
        cs.left = B.seg(W(g.r4), W(bottoms[j][0]));
        cs.mid = B.seg(W(bottoms[j][1]), W(g.b5));
        cs.horiz1 = B.seg(W(g.r6), W(g.b6));
        cs.right = B.seg(W(bottoms[j][2]), W(g.b7));
        cs.horiz2 = B.seg(W(g.r8), W(g.b8));
        for (std::size_t p = 0; p < g.padding.k(); ++p)
            cs.padding.push_back(B.seg(W(g.padding.reds[p]), W(g.padding.blues[p])));
        csegs.push_back(cs);
        audit("step 2", "clause " + std::to_string(j) + ": verticals on their edges",
              g.r4.x == e.edges[j][0] && g.b5.x == e.edges[j][1] && g.b7.x == e.edges[j][2]);
    }
    std::vector<int> mate(B.reds.size());
    for (std::size_t i = 0; i < mate.size(); ++i)
        mate[i] = static_cast<int>(i);
    Matching M(B.reds, B.blues, mate);

    auto top_of = [&](const SlotRef& r) -> const Point& {
        const ClauseGadget& g = cg[r.clause];
        return r.input == 0 ? g.r4 : r.input == 1 ? g.b5 : g.b7;
    };
    // horizontal segment of a top and its substitute (nearest endpoint)
    auto horizontal = [&](const SlotRef& r) {
        const ClauseGadget& g = cg[r.clause];
        if (r.input == 2)
            return std::array<Point, 3>{g.r8, g.b8, g.b8};
        return std::array<Point, 3>{g.r6, g.b6, r.input == 0 ? g.r6 : g.b6};
    };
    // far ends reachable by the top of slot `at` in its group (world coordinates)
    auto far_ends = [&](std::size_t i, int side, bool red_group, std::size_t at) {
        const SideSlots& S = slots[side];
        const SideGeometry sg = side_geom(i, side);
        std::vector<Point> out;
        if (red_group) {
            out.push_back(sg.TL);
            for (std::size_t q = 0; q < at; ++q)
                out.push_back(bottoms[S.red[i][q].clause][S.red[i][q].input]);
        } else {
            out.push_back(sg.TR);
            for (std::size_t q = at + 1; q < S.blue[i].size(); ++q)
                out.push_back(bottoms[S.blue[i][q].clause][S.blue[i][q].input]);
        }
        return out;
    };

    // steps 3-5 per variable side
    for (int side = 0; side < 2; ++side)
        for (std::size_t i = 0; i < v; ++i) {
            const SideSlots& S = slots[side];
            if (S.red[i].empty() && S.blue[i].empty())
                continue;
            const SideGeometry sg = side_geom(i, side);
            const std::string vn = std::string(side ? "negative" : "positive") + " side of " + f.variables[i];
            std::vector<Point> tops{sg.TL}, bots{sg.TL};
            for (const auto* grp : {&S.red[i], &S.blue[i]})
                for (const auto& r : *grp) {
                    tops.push_back(top_of(r));
                    bots.push_back(bottoms[r.clause][r.input]);
                }
            tops.push_back(sg.TR);
            bots.push_back(sg.TR);
            audit("step 3", vn + ": tops and the two topmost points in convex position",
                  in_convex_position(tops));
            bool inside = in_convex_position(bots);
            for (std::size_t q = 1; q + 1 < bots.size(); ++q)
                inside = inside && point_in_triangle(bots[q], sg.TL, sg.TR, sg.mid) == TriangleLocation::Inside;
            audit("step 4", vn + ": bottoms convex with the top corners, inside the top triangle", inside);
            for (int g = 0; g < 2; ++g) {
                const auto& grp = g == 0 ? S.red[i] : S.blue[i];
                for (std::size_t q = 0; q < grp.size(); ++q) {
                    // q-bar: next top toward the centre of the variable
                    const bool last = g == 0 ? q + 1 == grp.size() : q == 0;
                    if (last)
                        continue;
                    const SlotRef& p = grp[q];
                    const SlotRef& qq = g == 0 ? grp[q + 1] : grp[q - 1];
                    const auto fe = far_ends(i, side, g == 0, q);
                    const Point& qlow = fe.back(); // nearest far end of p
                    const Point& pt = top_of(p);
                    const Point& qt = top_of(qq);
                    const auto hz = horizontal(p);
                    bool ok = point_in_triangle(hz[2], pt, qlow, qt) == TriangleLocation::Inside;
                    ok = ok && !segments_cross(hz[0], hz[1], qt.color == Color::Red ? qt : qlow,
                                               qt.color == Color::Red ? qlow : qt);
                    ok = ok && segments_cross(hz[0], hz[1], pt.color == Color::Red ? pt : qlow,
                                              pt.color == Color::Red ? qlow : pt);
                    audit("step 5", vn + ": substitute of clause " + std::to_string(p.clause) + "." +
                                        std::to_string(p.input) + " in its triangle",
                          ok);
                }
            }
        }

    // clause tables with every combination of reachable far ends, and the padded forms;
    // one task per clause
    using SegSet = std::set<std::pair<std::string, std::string>>;
    struct ClauseWork {
        std::vector<AuditEntry> audits;
        std::vector<GadgetReport> reports;
        SegSet seen;
    };
    auto world_matching = [&](const Matching& G, int side) {
        std::vector<Point> R, Bl;
        for (const auto& p : G.points().reds())
            R.push_back(to_world(p, side));
        for (const auto& p : G.points().blues())
            Bl.push_back(to_world(p, side));
        return Matching(R, Bl, G.mates());
    };
    auto clause_work = [&](std::size_t j) {
        ClauseWork w;
        const auto& c = f.clauses[j];
        const int side = side_of[j];
        std::array<std::vector<Point>, 3> fars;
        for (int i = 0; i < 3; ++i) {
            const SideSlots& S = slots[side];
            const auto& grp = i == 0 ? S.blue[c.vars[i]] : S.red[c.vars[i]];
            std::size_t at = 0;
            while (!(grp[at].clause == static_cast<int>(j) && grp[at].input == i))
                ++at;
            fars[i] = far_ends(c.vars[i], side, i != 0, at);
        }
        const ClauseGadget& g = cg[j];
        auto collect = [&](const Matching& G) {
            if (opt.independence_audit)
                for (const auto& s : reachable_segments(world_matching(G, side), opt.budget))
                    w.seen.insert(s);
        };
        std::string bad;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int z = 0; z < 2; ++z)
                    for (std::size_t a = 0; a < (x ? 1 : fars[0].size()); ++a)
                        for (std::size_t b = 0; b < (y ? 1 : fars[1].size()); ++b)
                            for (std::size_t d = 0; d < (z ? 1 : fars[2].size()); ++d) {
                                const Matching G = g.with_inputs(x ? bottoms[j][0] : fars[0][a],
                                                                 y ? bottoms[j][1] : fars[1][b],
                                                                 z ? bottoms[j][2] : fars[2][d], false);
                                const GadgetReport r = clause_report(G, x, y, z, false);
                                if (!r.verdict && bad.empty())
                                    bad = r.id + " " + r.note;
                                collect(G);
                            }
        w.audits.push_back({"clause", "clause " + std::to_string(j) + ": composed OR table for all far ends" +
                                          (bad.empty() ? "" : " (" + bad + ")"),
                            bad.empty()});
        // padded forms with the nearest far ends
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int z = 0; z < 2; ++z) {
                    const Matching G = g.with_inputs(x ? bottoms[j][0] : fars[0].back(),
                                                     y ? bottoms[j][1] : fars[1].back(),
                                                     z ? bottoms[j][2] : fars[2].back(), true);
                    GadgetReport r = enumerate_report("", G, opt.budget);
                    const std::size_t len = composed_clause_length(x, y, z) + (x + y + z == 0 ? k : 0);
                    r.verdict = r.all_lengths(len);
                    r.id = "padded clause " + std::to_string(j) + " " + std::to_string(x) +
                           std::to_string(y) + std::to_string(z);
                    w.audits.push_back({"clause", r.id + ": all sequences of length " + std::to_string(len),
                                        r.verdict});
                    if (x + y + z == 0)
                        w.reports.push_back(r);
                    collect(G);
                }
        PaddingGadget pw{to_world(g.padding.trigger_red, side), to_world(g.padding.trigger_blue, side), {}, {}};
        for (std::size_t p = 0; p < g.padding.k(); ++p) {
            pw.reds.push_back(to_world(g.padding.reds[p], side));
            pw.blues.push_back(to_world(g.padding.blues[p], side));
        }
        GadgetReport pr = padding_report(pw);
        pr.id = "padding of clause " + std::to_string(j);
        w.audits.push_back({"step 1", pr.id + ": unique sequence of length k", pr.verdict});
        w.reports.push_back(pr);
        return w;
    };
    std::vector<SegSet> groups;
    {
        std::vector<std::future<ClauseWork>> tasks;
        for (std::size_t j = 0; j < f.c(); ++j)
            tasks.push_back(std::async(std::launch::async, clause_work, j));
        for (auto& t : tasks) {
            ClauseWork w = t.get();
            audits.insert(audits.end(), w.audits.begin(), w.audits.end());
            reports.insert(reports.end(), w.reports.begin(), w.reports.end());
            if (opt.independence_audit)
                groups.push_back(std::move(w.seen));
        }
    }

    // branching matchings
    for (int side = 0; side < 2; ++side)
        for (std::size_t i = 0; i < v; ++i) {
            const SideSlots& S = slots[side];
            const std::size_t a = S.red[i].size(), b = S.blue[i].size();
            if (a + b == 0)
                continue;
            const SideGeometry sg = side_geom(i, side);
            std::vector<Point> R{sg.TL}, Bl{sg.TR};
            for (const auto* grp : {&S.red[i], &S.blue[i]})
                for (const auto& r : *grp) {
                    const Point& t = top_of(r);
                    const Point& bo = bottoms[r.clause][r.input];
                    R.push_back(t.color == Color::Red ? t : bo);
                    Bl.push_back(t.color == Color::Red ? bo : t);
                    const auto hz = horizontal(r);
                    R.push_back(hz[0]);
                    Bl.push_back(hz[1]);
                }
            std::vector<int> m(R.size());
            for (std::size_t q = 0; q < m.size(); ++q)
                m[q] = static_cast<int>(q);
            const Matching G(R, Bl, m);
            GadgetReport r = enumerate_report("", G, opt.budget);
            r.id = std::string("branching ") + (side ? "negative" : "positive") + " " + f.variables[i] +
                   " a=" + std::to_string(a) + " b=" + std::to_string(b);
            r.verdict = r.all_lengths(2 * (a + b)) && r.ends.size() == 1;
            audit("branching", r.id + ": all sequences of length 2(a+b), one end", r.verdict);
            reports.push_back(r);
            if (opt.independence_audit) {
                std::vector<Point> RW, BW;
                for (const auto& p : R)
                    RW.push_back(to_world(p, side));
                for (const auto& p : Bl)
                    BW.push_back(to_world(p, side));
                groups.push_back(reachable_segments(Matching(RW, BW, m), opt.budget));
            }
        }
    if (opt.independence_audit)
        for (std::size_t i = 0; i < v; ++i)
            groups.push_back(reachable_segments(vars[i].matching(), opt.budget));

    // whole instance
    const ValidationReport gp = M.general_position();
    audit("general position", gp.valid ? "no mixed collinear triple"
                                       : "violations: " + std::to_string(gp.violations.size()) + ", e.g. " +
                                             gp.violations.front(),
          gp.valid);
    if (opt.build_only)
        return MPhi{f, e, k, M, vsegs, csegs, {}, audits, 0};
    {
        std::set<std::pair<int, int>> want;
        for (const auto& s : vsegs) {
            want.emplace(s[0], s[1]);
            want.emplace(s[0], s[2]);
        }
        const auto got = crossing_pairs(M);
        audit("initial crossings", "exactly the two crossings of each variable gadget",
              std::set<std::pair<int, int>>(got.begin(), got.end()) == want);
    }
    audit("point count", "6 per variable plus 10 + 2k per clause",
          2 * M.n() == 6 * v + f.c() * (10 + 2 * k));

    if (opt.independence_audit) {
        // a crossing between segments of two gadgets is explained only if one gadget run saw both
        std::map<std::string, Point> pts;
        for (const auto& p : M.points().all_points())
            pts.emplace(describe(p), p);
        std::map<std::pair<std::string, std::string>, std::vector<int>> where;
        for (std::size_t q = 0; q < groups.size(); ++q)
            for (const auto& s : groups[q])
                where[s].push_back(static_cast<int>(q));
        std::vector<std::pair<std::pair<std::string, std::string>, std::vector<int>>> list(where.begin(),
                                                                                          where.end());
        std::string bad;
        for (std::size_t a = 0; a < list.size() && bad.empty(); ++a)
            for (std::size_t b = a + 1; b < list.size(); ++b) {
                const auto& [sa, ga] = list[a];
                const auto& [sb, gb] = list[b];
                if (sa.first == sb.first || sa.second == sb.second)
                    continue;
                bool shared = false;
                for (int x : ga)
                    shared = shared || std::find(gb.begin(), gb.end(), x) != gb.end();
                if (shared)
                    continue;
                if (segments_cross(pts.at(sa.first), pts.at(sa.second), pts.at(sb.first), pts.at(sb.second))) {
                    bad = sa.first + "-" + sa.second + " x " + sb.first + "-" + sb.second;
                    break;
                }
            }
        audit("independence", "segments of distinct gadget runs never cross" + (bad.empty() ? "" : " (" + bad + ")"),
              bad.empty());
    }

    std::size_t bits = 0;
    for (const auto& p : M.points().all_points())
        bits = std::max({bits, bit_size(p.x), bit_size(p.y)});

    MPhi out{f, e, k, M, vsegs, csegs, reports, audits, bits};
    if (!nothrow)
        for (const auto& a : out.audits)
            if (!a.ok)
                throw Error(ErrorCode::AssemblyAuditFailed, a.step + ": " + a.constraint);
    return out;
}

inline MPhi assemble_m_phi(const RpmFormula& f, const Embedding& e, const Coord& alpha,
                           const AssemblyOptions& opt = {}, bool nothrow = false)
{
    return assemble_m_phi_k(f, e, padding_size(f, alpha), opt, nothrow);
}

// First derived embedding, plain or jittered, whose instance is in general position.
inline Embedding derive_embedding_gp(const RpmFormula& f, std::size_t k, LayoutConstants K = {})
{
    AssemblyOptions probe;
    probe.build_only = true;
    for (unsigned j = 0; j < 32; ++j) {
        K.jitter = j;
        Embedding e = derive_embedding(f, k, K);
        if (!validate_embedding(f, e).valid)
            return e;
        if (assemble_m_phi_k(f, e, k, probe, true).audits_ok())
            return e;
    }
    throw Error(ErrorCode::AssemblyAuditFailed, "layout: no jitter gives general position");
}

// Derive the embedding and assemble.
inline MPhi reduce(const RpmFormula& f, const Coord& alpha, const AssemblyOptions& opt = {},
                   bool nothrow = false)
{
    const std::size_t k = padding_size(f, alpha);
    return assemble_m_phi_k(f, derive_embedding_gp(f, k), k, opt, nothrow);
}

// ---------------------------------------------------------------- decisions

enum class Verdict { Satisfiable, Unsatisfiable };

inline const char* to_string(Verdict v) { return v == Verdict::Satisfiable ? "Satisfiable" : "Unsatisfiable"; }

struct Decision {
    Verdict verdict;
    std::size_t length;
    Coord threshold;
};

// Exact search stands in for the approximation algorithm.

inline Decision decide_via_untangling(const Matching& m_phi, const RpmFormula& f, const Coord& alpha,
                                     std::uint64_t budget = kDefaultBudget)
{
    const SearchResult r = shortest_untangle(m_phi, budget);
    const Coord thr = alpha * Coord(static_cast<long>(f.v() + 5 * f.c()));
    return Decision{Coord(static_cast<long>(r.length)) <= thr ? Verdict::Satisfiable : Verdict::Unsatisfiable,
                    r.length, thr};
}

inline Decision decide_via_untangling(const MPhi& m, const Coord& alpha, std::uint64_t budget = kDefaultBudget)
{
    return decide_via_untangling(m.matching, m.formula, alpha, budget);
}

// ---------------------------------------------------------------- branching

// Formula whose variable "x" carries a red-bottom and b blue-bottom verticals.
inline RpmFormula branching_formula(std::size_t a, std::size_t b)
{
    if (a > 2 || b > 2 || a + b == 0)
        throw Error(ErrorCode::InvalidArgument, "branching formulas exist for a, b in 0..2, a+b >= 1");
    // x is the right input of C1, the middle of C2, the left input of C3 and C4
    std::string s = "v0 p q x c d e g\n";
    if (a >= 1)
        s += "+ p q x @1\n";
    if (b >= 1)
        s += "+ x c d @1\n";
    if (b >= 2)
        s += "+ x d e @2\n";
    if (a >= 2)
        s += "+ v0 x g @" + std::to_string(b >= 2 ? 3 : 2) + "\n";
    return parse_formula(s);
}

inline GadgetReport verify_branching(std::size_t a, std::size_t b)
{
    const RpmFormula f = branching_formula(a, b);
    AssemblyOptions opt;
    opt.independence_audit = false;
    const MPhi m = assemble_m_phi_k(f, derive_embedding(f, 1), 1, opt, true);
    for (const auto& r : m.reports)
        if (r.id.rfind("branching positive x ", 0) == 0)
            return r;
    throw Error(ErrorCode::InvalidArgument, "branching matching not found");
}

} // namespace untangle

#endif

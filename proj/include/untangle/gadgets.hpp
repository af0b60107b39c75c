#ifndef UNTANGLE_GADGETS_HPP
#define UNTANGLE_GADGETS_HPP

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "engine.hpp"

namespace untangle {

struct Rect {
    Coord x0, y0, x1, y1;
};

// Result of enumerating every untangle sequence of a small gadget matching.
struct GadgetReport {
    std::string id;
    unsigned long count = 0;
    std::map<std::size_t, unsigned long> lengths;
    std::set<std::string> ends; // fingerprints of the final matchings
    bool verdict = false;
    std::string note;

    bool all_lengths(std::size_t L) const { return lengths.size() == 1 && lengths.begin()->first == L; }
};

// Segments as "r<i>b<j>" in red order.
inline std::string fingerprint(const Matching& M)
{
    std::string s;
    for (std::size_t i = 0; i < M.n(); ++i) {
        if (i)
            s += ',';
        s += "r" + std::to_string(i) + "b" + std::to_string(M.mate(i));
    }
    return s;
}

inline GadgetReport enumerate_report(const std::string& id, const Matching& M,
                                     std::uint64_t budget = kDefaultBudget)
{
    const SequenceSummary s = summarize_sequences(M, budget);
    GadgetReport r;
    r.id = id;
    r.count = s.count.get_ui();
    for (const auto& [L, c] : s.lengths)
        r.lengths[L] = c.get_ui();
    for (const auto& k : s.ends) {
        std::vector<int> mate(M.n());
        for (std::size_t i = 0; i < M.n(); ++i)
            mate[i] = static_cast<unsigned char>(k[2 * i]) |
                      (static_cast<unsigned char>(k[2 * i + 1]) << 8);
        r.ends.insert(fingerprint(M.with_mates(mate)));
    }
    return r;
}

inline bool end_has(const std::string& fp, std::size_t red, std::size_t blue)
{
    const std::string seg = "r" + std::to_string(red) + "b" + std::to_string(blue);
    std::size_t pos = 0;
    while ((pos = fp.find(seg, pos)) != std::string::npos) {
        const std::size_t end = pos + seg.size();
        if ((pos == 0 || fp[pos - 1] == ',') && (end == fp.size() || fp[end] == ','))
            return true;
        pos = end;
    }
    return false;
}

// ---------------------------------------------------------------- variable

struct VariableGadget {
    Point TL, BL, TR, BR, rm, bm;

    // reds {BL, rm, TL}, blues {TR, BR, bm}: diagonal, rm-BR, TL-bm
    Matching matching() const { return Matching({BL, rm, TL}, {TR, BR, bm}, {0, 1, 2}); }
};

// Mid points sit on the middle vertical at height offset `delta` from the diagonal.
inline VariableGadget build_variable_gadget(const Rect& r, const Coord& delta)
{
    if (r.x1 <= r.x0 || r.y1 <= r.y0)
        throw Error(ErrorCode::DegenerateRectangle, "rectangle has no interior");
    if (delta <= 0 || 2 * delta >= r.y1 - r.y0)
        throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, height/2)");
    const Coord xm = (r.x0 + r.x1) / 2, ym = (r.y0 + r.y1) / 2;
    return VariableGadget{red(r.x0, r.y1), red(r.x0, r.y0), blue(r.x1, r.y1), blue(r.x1, r.y0),
                          red(xm, ym + delta), blue(xm, ym - delta)};
}

inline VariableGadget build_variable_gadget(const Rect& r)
{
    return build_variable_gadget(r, (r.y1 - r.y0) / 8);
}

// Lemma: two sequences of length 1 with distinct ends.
inline GadgetReport variable_report(const VariableGadget& g)
{
    GadgetReport r = enumerate_report("variable", g.matching());
    r.verdict = r.count == 2 && r.all_lengths(1) && r.ends.size() == 2;
    return r;
}

// ---------------------------------------------------------------- template

// Clause template in its own coordinates. Inputs on x = 0, 10, 20; tops at y >= 20.
// Input forms: left 1 -> r4b4, 0 -> r4b9; middle 1 -> r5b5, 0 -> r10b5; right 1 -> r7b7, 0 -> r11b7.
struct ClauseTemplate {
    Point r4 = red(0, 20), b4 = blue(0, -41), b9 = blue(2, -40);
    Point b5 = blue(10, 20), r5 = red(10, -42), r10 = red(8, -43);
    Point r6 = red(make_coord(1, 4), 5), b6 = blue(make_coord(39, 4), 5);
    Point r7 = red(20, -44), r11 = red(18, -45), b7 = blue(20, make_coord(273, 8));
    Point r8 = red(make_coord(15, 8), make_coord(149, 8));
    Point b8 = blue(make_coord(79, 4), make_coord(183, 8));
};

// Template point (x, y) -> (x0 + sx*x/(1+cx), y0 + sy*y/(1+cx)). The projective part keeps
// verticals vertical and moves the middle input without changing any orientation.
struct Frame {
    Coord x0 = 0, y0 = 0, sx = 1, sy = 1, c = 0;

    Point map(const Point& p) const
    {
        const Coord d = 1 + c * p.x;
        return Point{x0 + sx * (p.x / d), y0 + sy * (p.y / d), p.color};
    }

    // Inverse of map on coordinates.
    std::pair<Coord, Coord> unmap(const Coord& X, const Coord& Y) const
    {
        const Coord u = (X - x0) / sx, v = (Y - y0) / sy;
        const Coord d = 1 - c * u;
        return {u / d, v / d};
    }
};

// Frame sending the inputs to xa < xb < xc, with template y = 0 at y0.
inline Frame clause_frame(const Coord& xa, const Coord& xb, const Coord& xc, const Coord& y0,
                          const Coord& sy)
{
    if (!(xa < xb && xb < xc))
        throw Error(ErrorCode::InvalidArgument, "clause inputs must be strictly increasing");
    if (sy <= 0)
        throw Error(ErrorCode::InvalidArgument, "clause scale must be positive");
    const Coord t = (xb - xa) / (xc - xa);
    Frame f;
    f.c = (2 * t - 1) / (20 * (1 - t));
    const Coord x20 = Coord(20) / (1 + 20 * f.c);
    f.sx = (xc - xa) / x20;
    f.x0 = xa;
    f.y0 = y0;
    f.sy = sy;
    return f;
}

// ---------------------------------------------------------------- OR gadget

struct OrGadget {
    Point r1, r2, r2p, r3, b1, b1p, b2, b3;

    // left/right input values; the output segment is r1b2.
    Matching matching(bool left, bool right) const
    {
        return Matching({r1, right ? r2 : r2p, r3}, {left ? b1 : b1p, b2, b3}, {0, 1, 2});
    }
};

namespace detail {

struct OrConstraint {
    std::string name;
    std::array<std::array<int, 2>, 3> segs; // (red, blue) codes
    int pattern;                            // 0: crossing-free, 1: only first two cross, 2: only first two do not
};

// red codes 0 r1, 1 r2, 2 r2', 3 r3; blue codes 0 b1, 1 b1', 2 b2, 3 b3
inline const std::vector<OrConstraint>& or_constraints()
{
    static const std::vector<OrConstraint> cs = {
        {"0v0 {r1b1', r2'b2, r3b3}", {{{0, 1}, {2, 2}, {3, 3}}}, 2},
        {"0v1 {r1b1', r3b3, r2b2}", {{{0, 1}, {3, 3}, {1, 2}}}, 1},
        {"1v0 {r2'b2, r3b3, r1b1}", {{{2, 2}, {3, 3}, {0, 0}}}, 1},
        {"1v1 {r1b1, r2b2, r3b3}", {{{0, 0}, {1, 2}, {3, 3}}}, 0},
        {"{r1b2, r2'b3, r3b1'}", {{{0, 2}, {2, 3}, {3, 1}}}, 0},
        {"{r1b3, r2b2, r3b1'}", {{{0, 3}, {1, 2}, {3, 1}}}, 0},
        {"{r1b1, r2'b3, r3b2}", {{{0, 0}, {2, 3}, {3, 2}}}, 0},
        {"{r1b3, r2'b2, r3b1'}", {{{0, 3}, {2, 2}, {3, 1}}}, 1},
        {"{r1b1', r3b2, r2'b3}", {{{0, 1}, {3, 2}, {2, 3}}}, 1},
    };
    return cs;
}

} // namespace detail

// Names of the violated definition clauses; empty when the point set is an OR gadget.
inline std::vector<std::string> audit_or_gadget(const OrGadget& g)
{
    const std::array<const Point*, 4> R = {&g.r1, &g.r2, &g.r2p, &g.r3};
    const std::array<const Point*, 4> B = {&g.b1, &g.b1p, &g.b2, &g.b3};
    std::vector<std::string> bad;
    for (const auto& c : detail::or_constraints()) {
        auto cross = [&](int a, int b) {
            return segments_cross(*R[c.segs[a][0]], *B[c.segs[a][1]], *R[c.segs[b][0]],
                                  *B[c.segs[b][1]]);
        };
        const bool x01 = cross(0, 1), x02 = cross(0, 2), x12 = cross(1, 2);
        bool ok = false;
        if (c.pattern == 0)
            ok = !x01 && !x02 && !x12;
        else if (c.pattern == 1)
            ok = x01 && !x02 && !x12;
        else
            ok = !x01 && x02 && x12;
        if (!ok)
            bad.push_back(c.name);
    }
    return bad;
}

// First OR gadget of the clause template, placed by `f`.
inline OrGadget build_or_gadget(const Frame& f)
{
    const ClauseTemplate t;
    OrGadget g{f.map(t.r4), f.map(t.r5), f.map(t.r10), f.map(t.r6),
               f.map(t.b4), f.map(t.b9), f.map(t.b5), f.map(t.b6)};
    const auto bad = audit_or_gadget(g);
    if (!bad.empty())
        throw Error(ErrorCode::ConstraintUnsatisfied, bad.front());
    return g;
}

inline GadgetReport or_report(const OrGadget& g, bool left, bool right)
{
    const Matching M = g.matching(left, right);
    GadgetReport r = enumerate_report(std::string("or ") + (left ? "1" : "0") + "v" +
                                          (right ? "1" : "0"),
                                      M);
    bool out_all = true, out_none = true; // output segment r1b2 = red 0, blue 1
    for (const auto& e : r.ends) {
        out_all = out_all && end_has(e, 0, 1);
        out_none = out_none && !end_has(e, 0, 1);
    }
    if (!left && !right)
        r.verdict = r.count == 2 && r.all_lengths(2) && r.ends.size() == 1 && out_all;
    else if (left && right)
        r.verdict = r.count == 1 && r.all_lengths(0) && out_none;
    else
        r.verdict = r.count == 1 && r.all_lengths(1) && out_none;
    return r;
}

// ---------------------------------------------------------------- padding

struct PaddingGadget {
    Point trigger_red, trigger_blue;
    std::vector<Point> reds, blues; // padding segment i is reds[i]-blues[i]

    std::size_t k() const { return reds.size(); }

    // trigger segment first, then the padding segments
    Matching triggered() const
    {
        std::vector<Point> R{trigger_red}, B{trigger_blue};
        R.insert(R.end(), reds.begin(), reds.end());
        B.insert(B.end(), blues.begin(), blues.end());
        std::vector<int> mate(R.size());
        for (std::size_t i = 0; i < mate.size(); ++i)
            mate[i] = static_cast<int>(i);
        return Matching(R, B, mate);
    }

    Matching untriggered() const
    {
        if (reds.empty())
            throw Error(ErrorCode::InvalidArgument, "0-padding has no segment besides the trigger");
        std::vector<int> mate(reds.size());
        for (std::size_t i = 0; i < mate.size(); ++i)
            mate[i] = static_cast<int>(i);
        return Matching(reds, blues, mate);
    }
};

// A fan of segments turning about the trigger's blue end; segment i crosses only segment
// i-1's successor created by the previous flip. Needs the red end left of the blue end.
inline PaddingGadget build_padding(std::size_t k, const Point& trigger_red, const Point& trigger_blue)
{
    const Point& O = trigger_blue;
    const Point& A = trigger_red;
    if (A.x >= O.x)
        throw Error(ErrorCode::InvalidArgument, "trigger red end must be left of its blue end");
    const long q = static_cast<long>(k) + 1;
    const Coord sigma = make_coord(1, 4 * q), tau = make_coord(1, 40 * q);
    const Coord mu = make_coord(19, 20), grow = make_coord(-1, 200 * q);
    const Coord L = O.x - A.x;
    const Coord m0 = (A.y - O.y) / L;
    PaddingGadget p{A, O, {}, {}};
    for (std::size_t i = 1; i <= k; ++i) {
        const Coord Ri = L * (1 + grow * Coord(static_cast<long>(i)));
        const Coord Rp = L * (1 + grow * Coord(static_cast<long>(i - 1)));
        const Coord mi = m0 + sigma * Coord(static_cast<long>(i));
        const Coord mp = m0 + sigma * Coord(static_cast<long>(i - 1));
        p.reds.push_back(red(O.x - Ri, O.y + Ri * mi));
        p.blues.push_back(blue(O.x - mu * Rp, O.y + mu * Rp * (mp - tau)));
    }
    return p;
}

inline GadgetReport padding_report(const PaddingGadget& p)
{
    GadgetReport r = enumerate_report("padding k=" + std::to_string(p.k()), p.triggered());
    r.verdict = r.count == 1 && r.all_lengths(p.k());
    if (p.k() > 0 && !is_crossing_free(p.untriggered())) {
        r.verdict = false;
        r.note = "untriggered form has crossings";
    }
    return r;
}

// ---------------------------------------------------------------- clause

struct ClauseGadget {
    Frame frame;
    Point r4, b5, b7, r6, b6, r8, b8; // tops and the two horizontals
    PaddingGadget padding;            // triggered by r4b7

    // Segments: 0 r4-left, 1 mid-b5, 2 r6b6, 3 right-b7, 4 r8b8, then padding.
    Matching with_inputs(const Point& left_blue, const Point& mid_red, const Point& right_red,
                         bool padded) const
    {
        std::vector<Point> R{r4, mid_red, r6, right_red, r8};
        std::vector<Point> B{left_blue, b5, b6, b7, b8};
        if (padded) {
            R.insert(R.end(), padding.reds.begin(), padding.reds.end());
            B.insert(B.end(), padding.blues.begin(), padding.blues.end());
        }
        std::vector<int> mate(R.size());
        for (std::size_t i = 0; i < mate.size(); ++i)
            mate[i] = static_cast<int>(i);
        return Matching(R, B, mate);
    }

    // Stand-alone input forms taken from the template.
    Matching matching(bool x, bool y, bool z, bool padded = false) const
    {
        const ClauseTemplate t;
        return with_inputs(frame.map(x ? t.b4 : t.b9), frame.map(y ? t.r5 : t.r10),
                           frame.map(z ? t.r7 : t.r11), padded);
    }

    OrGadget first_or() const
    {
        const ClauseTemplate t;
        return OrGadget{r4, frame.map(t.r5), frame.map(t.r10), r6,
                        frame.map(t.b4), frame.map(t.b9), b5, b6};
    }
};

inline ClauseGadget build_clause_gadget(const Frame& f, std::size_t k)
{
    const ClauseTemplate t;
    const PaddingGadget pt = build_padding(k, t.r4, t.b7);
    PaddingGadget pad{f.map(t.r4), f.map(t.b7), {}, {}};
    for (const auto& p : pt.reds)
        pad.reds.push_back(f.map(p));
    for (const auto& p : pt.blues)
        pad.blues.push_back(f.map(p));
    ClauseGadget g{f, f.map(t.r4), f.map(t.b5), f.map(t.b7), f.map(t.r6), f.map(t.b6),
                   f.map(t.r8), f.map(t.b8), std::move(pad)};
    const auto bad = audit_or_gadget(g.first_or());
    if (!bad.empty())
        throw Error(ErrorCode::ConstraintUnsatisfied, "first OR gadget: " + bad.front());
    // r8 strictly inside the first gadget's top triangle
    const Point& low = g.r6.y > g.b6.y ? g.r6 : g.b6;
    if (point_in_triangle(g.r8, g.r4, g.b5, low) != TriangleLocation::Inside)
        throw Error(ErrorCode::ConstraintUnsatisfied, "r8 not inside the top triangle of the first OR gadget");
    return g;
}

// Clause with inputs xa < xb < xc, y0 the bottom of its template, sy its vertical scale.
inline ClauseGadget build_clause_gadget(const Coord& xa, const Coord& xb, const Coord& xc,
                                        const Coord& y0, const Coord& sy, std::size_t k)
{
    return build_clause_gadget(clause_frame(xa, xb, xc, y0, sy), k);
}

// Lengths the composed gadget produces: the second OR sees the first one's output.
inline std::size_t composed_clause_length(bool x, bool y, bool z)
{
    const int t = x + y + z;
    if (t == 0)
        return 4;
    if (t == 1)
        return z ? 3 : 2;
    return t == 2 ? 1 : 0;
}

// Lengths claimed for the clause gadget: 4, 2, 1, 0 by number of true inputs.
inline std::size_t claimed_clause_length(bool x, bool y, bool z)
{
    static const std::size_t L[4] = {4, 2, 1, 0};
    return L[x + y + z];
}

// r4b7 is red 0, blue 3 in with_inputs order.
inline GadgetReport clause_report(const Matching& M, bool x, bool y, bool z, bool strict_claim)
{
    GadgetReport r = enumerate_report(std::string("clause ") + (x ? "1" : "0") + (y ? "1" : "0") +
                                          (z ? "1" : "0"),
                                      M);
    const int t = x + y + z;
    const std::size_t L = strict_claim ? claimed_clause_length(x, y, z) : composed_clause_length(x, y, z);
    bool out_all = true, out_none = true;
    for (const auto& e : r.ends) {
        out_all = out_all && end_has(e, 0, 3);
        out_none = out_none && !end_has(e, 0, 3);
    }
    r.verdict = r.all_lengths(L) && (t == 0 ? out_all && r.ends.size() == 1 : out_none);
    if (t == 2)
        r.verdict = r.verdict && r.count == 1;
    if (!r.verdict && r.lengths.size() == 1)
        r.note = "length " + std::to_string(r.lengths.begin()->first) + ", expected " + std::to_string(L);
    return r;
}

} // namespace untangle

#endif

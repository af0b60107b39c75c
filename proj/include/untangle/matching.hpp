#ifndef UNTANGLE_MATCHING_HPP
#define UNTANGLE_MATCHING_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace untangle {

// Fixed red and blue arrays shared by every configuration on them.
// Point ids: red i -> i, blue j -> n + j.
class PointSet {
public:
    static constexpr std::size_t kCacheLimit = 192; // max 2n for the orientation cache

    PointSet(std::vector<Point> reds, std::vector<Point> blues)
        : reds_(std::move(reds)), blues_(std::move(blues))
    {
        if (reds_.size() != blues_.size())
            throw Error(ErrorCode::InvalidArgument, "red and blue counts differ");
        for (const auto& p : reds_)
            if (p.color != Color::Red)
                throw Error(ErrorCode::InvalidArgument, "non-red point in red array");
        for (const auto& p : blues_)
            if (p.color != Color::Blue)
                throw Error(ErrorCode::InvalidArgument, "non-blue point in blue array");
        const std::size_t N = 2 * reds_.size();
        if (N <= kCacheLimit && N > 0) {
            cache_.reset(new std::atomic<std::int8_t>[N * N * N]);
            for (std::size_t i = 0; i < N * N * N; ++i)
                cache_[i].store(kUnknown, std::memory_order_relaxed);
        }
    }

    std::size_t n() const { return reds_.size(); }
    const std::vector<Point>& reds() const { return reds_; }
    const std::vector<Point>& blues() const { return blues_; }
    const Point& red(std::size_t i) const { return reds_[i]; }
    const Point& blue(std::size_t j) const { return blues_[j]; }
    const Point& point(std::size_t id) const { return id < n() ? reds_[id] : blues_[id - n()]; }

    std::vector<Point> all_points() const
    {
        std::vector<Point> v(reds_);
        v.insert(v.end(), blues_.begin(), blues_.end());
        return v;
    }

    int orient(std::size_t a, std::size_t b, std::size_t c) const
    {
        if (!cache_)
            return orient_sign(point(a), point(b), point(c));
        const std::size_t N = 2 * n();
        auto& slot = cache_[(a * N + b) * N + c];
        std::int8_t v = slot.load(std::memory_order_relaxed);
        if (v == kUnknown) {
            v = static_cast<std::int8_t>(orient_sign(point(a), point(b), point(c)));
            slot.store(v, std::memory_order_relaxed);
        }
        return v;
    }

private:
    static constexpr std::int8_t kUnknown = 2;
    std::vector<Point> reds_;
    std::vector<Point> blues_;
    std::unique_ptr<std::atomic<std::int8_t>[]> cache_;
};

struct Flip {
    int i = 0;
    int j = 0;
    bool operator==(const Flip& o) const { return i == o.i && j == o.j; }
};

enum class PairState { X, H, T };

inline char to_char(PairState s) { return s == PairState::X ? 'X' : s == PairState::H ? 'H' : 'T'; }

// A configuration: mate[i] is the blue matched to red i. Segment ids are red indices.
class Matching {
public:
    Matching(std::vector<Point> reds, std::vector<Point> blues, std::vector<int> mate)
        : Matching(std::make_shared<const PointSet>(std::move(reds), std::move(blues)),
                   std::move(mate))
    {
    }

    Matching(std::shared_ptr<const PointSet> pts, std::vector<int> mate)
        : pts_(std::move(pts)), mate_(std::move(mate))
    {
        const std::size_t n = pts_->n();
        if (n == 0)
            throw Error(ErrorCode::InvalidArgument, "empty matching");
        if (mate_.size() != n)
            throw Error(ErrorCode::InvalidArgument, "mate has wrong length");
        std::vector<char> seen(n, 0);
        for (int b : mate_) {
            if (b < 0 || static_cast<std::size_t>(b) >= n || seen[b])
                throw Error(ErrorCode::InvalidArgument, "mate is not a permutation");
            seen[b] = 1;
        }
    }

    std::size_t n() const { return pts_->n(); }
    const PointSet& points() const { return *pts_; }
    const std::shared_ptr<const PointSet>& point_set() const { return pts_; }
    const std::vector<int>& mates() const { return mate_; }
    int mate(std::size_t i) const { return mate_[i]; }
    const Point& red(std::size_t i) const { return pts_->red(i); }
    const Point& blue(std::size_t j) const { return pts_->blue(j); }
    const Point& blue_of(std::size_t i) const { return pts_->blue(mate_[i]); }
    Segment segment(std::size_t i) const { return Segment{red(i), blue_of(i)}; }

    std::size_t blue_id(std::size_t i) const { return n() + mate_[i]; }

    bool crosses(std::size_t i, std::size_t j) const
    {
        return crosses_with(i, mate_[i], j, mate_[j]);
    }

    // Segments (r_i, b_bi) and (r_j, b_bj) cross.
    bool crosses_with(std::size_t i, std::size_t bi, std::size_t j, std::size_t bj) const
    {
        const std::size_t a = i, b = n() + bi, c = j, d = n() + bj;
        return proper_cross(pts_->orient(a, b, c), pts_->orient(a, b, d), pts_->orient(c, d, a),
                            pts_->orient(c, d, b));
    }

    bool crosses_any(std::size_t i) const
    {
        for (std::size_t j = 0; j < n(); ++j)
            if (j != i && crosses(i, j))
                return true;
        return false;
    }

    std::string key() const
    {
        std::string k(mate_.size() * 2, '\0');
        for (std::size_t i = 0; i < mate_.size(); ++i) {
            k[2 * i] = static_cast<char>(mate_[i] & 0xff);
            k[2 * i + 1] = static_cast<char>((mate_[i] >> 8) & 0xff);
        }
        return k;
    }

    Matching with_mates(std::vector<int> m) const { return Matching(pts_, std::move(m)); }

    ValidationReport general_position(bool red_on_line = false) const
    {
        return check_general_position(pts_->all_points(), red_on_line);
    }

    bool operator==(const Matching& o) const
    {
        return mate_ == o.mate_ && (pts_ == o.pts_ || (pts_->reds() == o.pts_->reds() &&
                                                       pts_->blues() == o.pts_->blues()));
    }

private:
    std::shared_ptr<const PointSet> pts_;
    std::vector<int> mate_;
};

// State of the pair formed by segment (r_i, b_bi) and segment (r_j, b_bj).
inline PairState pair_state_with(const Matching& M, std::size_t i, std::size_t bi, std::size_t j,
                                 std::size_t bj)
{
    if (M.crosses_with(i, bi, j, bj))
        return PairState::X;
    const PointSet& P = M.points();
    const std::size_t n = M.n();
    const std::size_t id[4] = {i, n + bi, j, n + bj};
    for (int skip = 0; skip < 4; ++skip) {
        std::size_t t[3];
        int k = 0;
        for (int q = 0; q < 4; ++q)
            if (q != skip)
                t[k++] = id[q];
        const std::size_t p = id[skip];
        const int o = P.orient(t[0], t[1], t[2]);
        const int s1 = P.orient(t[0], t[1], p), s2 = P.orient(t[1], t[2], p),
                  s3 = P.orient(t[2], t[0], p);
        if (o == 0 || s1 == 0 || s2 == 0 || s3 == 0) {
            std::vector<Point> four;
            for (auto x : id)
                four.push_back(P.point(x));
            return in_convex_position(four) ? PairState::H : PairState::T;
        }
        if (s1 == o && s2 == o && s3 == o)
            return PairState::T;
    }
    return PairState::H;
}

inline PairState pair_state(const Matching& M, std::size_t i, std::size_t j)
{
    if (i == j)
        throw Error(ErrorCode::InvalidArgument, "pair_state needs i != j");
    return pair_state_with(M, i, M.mate(i), j, M.mate(j));
}

inline Matching apply_flip(const Matching& M, const Flip& f)
{
    if (f.i == f.j || f.i < 0 || f.j < 0 || static_cast<std::size_t>(f.i) >= M.n() ||
        static_cast<std::size_t>(f.j) >= M.n())
        throw Error(ErrorCode::InvalidArgument, "bad flip indices");
    if (!M.crosses(f.i, f.j))
        throw Error(ErrorCode::NotCrossing,
                    "segments " + std::to_string(f.i) + " and " + std::to_string(f.j) +
                        " do not cross");
    std::vector<int> m = M.mates();
    std::swap(m[f.i], m[f.j]);
    return M.with_mates(std::move(m));
}

inline std::vector<std::pair<int, int>> crossing_pairs(const Matching& M)
{
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < M.n(); ++i)
        for (std::size_t j = i + 1; j < M.n(); ++j)
            if (M.crosses(i, j))
                out.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return out;
}

inline std::size_t crossing_count(const Matching& M)
{
    std::size_t c = 0;
    for (std::size_t i = 0; i < M.n(); ++i)
        for (std::size_t j = i + 1; j < M.n(); ++j)
            c += M.crosses(i, j);
    return c;
}

inline bool is_crossing_free(const Matching& M)
{
    for (std::size_t i = 0; i < M.n(); ++i)
        for (std::size_t j = i + 1; j < M.n(); ++j)
            if (M.crosses(i, j))
                return false;
    return true;
}

// Sum of segment lengths, accumulated with 256-bit floats, returned with a 64-bit mantissa.
inline long double total_length(const Matching& M)
{
    const mp_bitcnt_t prec = 256;
    mpf_class sum(0, prec);
    for (std::size_t i = 0; i < M.n(); ++i) {
        const Point& r = M.red(i);
        const Point& b = M.blue_of(i);
        mpq_class d2 = (b.x - r.x) * (b.x - r.x) + (b.y - r.y) * (b.y - r.y);
        mpf_class f(d2, prec);
        mpf_class s(0, prec);
        mpf_sqrt(s.get_mpf_t(), f.get_mpf_t());
        sum += s;
    }
    const double hi = sum.get_d();
    mpf_class rest(sum - mpf_class(hi, prec), prec);
    return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

inline std::size_t nonH_count(const Matching& M)
{
    std::size_t c = 0;
    for (std::size_t i = 0; i < M.n(); ++i)
        for (std::size_t j = i + 1; j < M.n(); ++j)
            c += pair_state(M, i, j) != PairState::H;
    return c;
}

inline bool is_red_on_line(const Matching& M)
{
    for (const auto& r : M.points().reds())
        if (r.y != 0)
            return false;
    for (const auto& b : M.points().blues())
        if (b.y <= 0)
            return false;
    return true;
}

inline void require_red_on_line(const Matching& M)
{
    if (!is_red_on_line(M))
        throw Error(ErrorCode::NotRedOnLine, "reds must lie on y=0 with blues strictly above");
}

inline void require_distinct_blue_heights(const Matching& M)
{
    std::vector<Coord> ys;
    for (const auto& b : M.points().blues())
        ys.push_back(b.y);
    std::sort(ys.begin(), ys.end());
    for (std::size_t i = 1; i < ys.size(); ++i)
        if (ys[i] == ys[i - 1])
            throw Error(ErrorCode::TiedBlueHeights, "two blue points at height " + to_string(ys[i]));
}

inline std::size_t top_segment(const Matching& M)
{
    require_red_on_line(M);
    require_distinct_blue_heights(M);
    std::size_t best = 0;
    for (std::size_t i = 1; i < M.n(); ++i)
        if (M.blue_of(i).y > M.blue_of(best).y)
            best = i;
    return best;
}

// Segments of a parent matching, re-indexed as a standalone matching.
struct SubMatching {
    std::vector<int> red_ids; // parent red index of each sub red
    std::optional<Matching> matching;

    bool empty() const { return red_ids.empty(); }
};

inline SubMatching restrict_to(const Matching& M, const std::vector<int>& ids)
{
    SubMatching s;
    s.red_ids = ids;
    if (ids.empty())
        return s;
    std::vector<Point> reds, blues;
    std::vector<int> mate;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        reds.push_back(M.red(ids[k]));
        blues.push_back(M.blue_of(ids[k]));
        mate.push_back(static_cast<int>(k));
    }
    s.matching.emplace(std::move(reds), std::move(blues), std::move(mate));
    return s;
}

struct SideSplit {
    SubMatching left;  // counter-clockwise side of the directed line red -> blue
    SubMatching right;
};

inline SideSplit side_split(const Matching& M, std::size_t i)
{
    require_red_on_line(M);
    if (M.crosses_any(i))
        throw Error(ErrorCode::SegmentStillCrossing, "segment " + std::to_string(i) + " crosses");
    const PointSet& P = M.points();
    std::vector<int> left, right;
    for (std::size_t j = 0; j < M.n(); ++j) {
        if (j == i)
            continue;
        const int a = P.orient(i, M.blue_id(i), j);
        const int b = P.orient(i, M.blue_id(i), M.blue_id(j));
        if (a > 0 && b > 0)
            left.push_back(static_cast<int>(j));
        else if (a < 0 && b < 0)
            right.push_back(static_cast<int>(j));
        else
            throw Error(ErrorCode::SplitAmbiguous,
                        "segment " + std::to_string(j) + " straddles the line of segment " +
                            std::to_string(i));
    }
    return SideSplit{restrict_to(M, left), restrict_to(M, right)};
}

// Coarsest-forced partition of the given segments: parts merged while their hulls meet.
inline std::vector<std::vector<int>> disjoint_hull_parts(const Matching& M, std::vector<int> ids)
{
    std::vector<std::vector<int>> parts;
    for (int s : ids)
        parts.push_back({s});
    auto hull_of = [&](const std::vector<int>& part) {
        std::vector<Point> pts;
        for (int s : part) {
            pts.push_back(M.red(s));
            pts.push_back(M.blue_of(s));
        }
        return convex_hull(pts);
    };
    bool merged = true;
    while (merged) {
        merged = false;
        std::vector<std::vector<Point>> hulls;
        for (const auto& p : parts)
            hulls.push_back(hull_of(p));
        for (std::size_t a = 0; a < parts.size() && !merged; ++a)
            for (std::size_t b = a + 1; b < parts.size() && !merged; ++b)
                if (hulls_meet(hulls[a], hulls[b])) {
                    parts[a].insert(parts[a].end(), parts[b].begin(), parts[b].end());
                    parts.erase(parts.begin() + static_cast<long>(b));
                    merged = true;
                }
    }
    return parts;
}

// Segment i crosses nothing and misses the hull of every forced part of the others.
inline bool is_free(const Matching& M, std::size_t i)
{
    if (M.crosses_any(i))
        return false;
    std::vector<int> others;
    for (std::size_t j = 0; j < M.n(); ++j)
        if (j != i)
            others.push_back(static_cast<int>(j));
    const std::vector<Point> seg = {M.red(i), M.blue_of(i)};
    for (const auto& part : disjoint_hull_parts(M, others)) {
        std::vector<Point> pts;
        for (int s : part) {
            pts.push_back(M.red(s));
            pts.push_back(M.blue_of(s));
        }
        if (hulls_meet(convex_hull(pts), seg))
            return false;
    }
    return true;
}

} // namespace untangle

#endif

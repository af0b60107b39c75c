#ifndef UNTANGLE_GENERATORS_HPP
#define UNTANGLE_GENERATORS_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "engine.hpp"

namespace untangle {

// Reds (i,0) for i = 1..n; blues (-j, j) on y = -x; red i matched to blue n+1-i.
inline Matching make_star(std::size_t n)
{
    std::vector<Point> reds, blues;
    std::vector<int> mate;
    for (std::size_t i = 1; i <= n; ++i) {
        reds.push_back(red(Coord(static_cast<long>(i)), 0));
        blues.push_back(blue(Coord(-static_cast<long>(i)), Coord(static_cast<long>(i))));
        mate.push_back(static_cast<int>(n - i));
    }
    return Matching(std::move(reds), std::move(blues), std::move(mate));
}

// Bubble sort over adjacent reds (left to right); each swap removes one inversion.
inline FlipSequence scripted_star_sequence(const Matching& star)
{
    FlipSequence seq(star);
    std::vector<std::size_t> order(star.n());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return star.red(a).x < star.red(b).x; });
    for (std::size_t pass = 0; pass + 1 < order.size(); ++pass)
        for (std::size_t t = 0; t + 1 < order.size() - pass; ++t) {
            const int a = static_cast<int>(order[t]), b = static_cast<int>(order[t + 1]);
            if (seq.end.crosses(a, b))
                seq.push(Flip{a, b});
        }
    return seq;
}

inline std::vector<std::vector<PairState>> pair_state_matrix(const Matching& M)
{
    std::vector<std::vector<PairState>> s(M.n(), std::vector<PairState>(M.n(), PairState::H));
    for (std::size_t i = 0; i < M.n(); ++i)
        for (std::size_t j = i + 1; j < M.n(); ++j)
            s[i][j] = s[j][i] = pair_state(M, i, j);
    return s;
}

// Red ids: r_i -> i-1, r'_i -> m+i-1. Blue ids likewise; mate is the identity.
inline Matching butterfly_points(std::size_t m, const std::vector<Coord>& dy)
{
    const long M1 = static_cast<long>(m) + 1;
    std::vector<Point> reds(2 * m), blues(2 * m);
    std::vector<int> mate(2 * m);
    for (long i = 1; i <= static_cast<long>(m); ++i) {
        reds[i - 1] = red(make_coord(i, M1), 0);
        reds[m + i - 1] = red(make_coord(-i, M1), 0);
        blues[i - 1] = blue(Coord(i - M1), Coord(M1 - i) + dy[i - 1]);
        blues[m + i - 1] = blue(Coord(M1 - i), Coord(M1 - i) + dy[m + i - 1]);
    }
    std::iota(mate.begin(), mate.end(), 0);
    return Matching(std::move(reds), std::move(blues), std::move(mate));
}

// Blue shift index t: b'_i -> m+1-i, b_i -> 2m+1-i, so b_1 ends strictly highest.
inline Coord butterfly_epsilon(std::size_t m)
{
    const std::size_t spread = 2 * m;
    const std::size_t bound = 4 * m * m * spread;
    mpz_class den = 1;
    while (den <= bound)
        den *= 2;
    den *= den; // squared: shifts stay far below the 1/(m+1) red spacing after projection
    return Coord(mpz_class(1), den);
}

inline Matching make_butterfly(std::size_t m, bool perturb)
{
    if (m == 0)
        throw Error(ErrorCode::InvalidArgument, "butterfly needs m >= 1");
    std::vector<Coord> dy(2 * m, Coord(0));
    const Matching plain = butterfly_points(m, dy);
    if (!perturb)
        return plain;
    const Coord eps = butterfly_epsilon(m);
    for (std::size_t i = 1; i <= m; ++i) {
        dy[i - 1] = Coord(static_cast<long>(2 * m + 1 - i)) * eps;
        dy[m + i - 1] = Coord(static_cast<long>(m + 1 - i)) * eps;
    }
    Matching out = butterfly_points(m, dy);
    if (pair_state_matrix(out) != pair_state_matrix(plain))
        throw Error(ErrorCode::PerturbationChangedStates, "perturbation altered a pair state");
    return out;
}

namespace detail {

// Among crossing pairs with both reds in `side`, pick the one whose reds are extreme.
inline std::optional<Flip> extreme_crossing(const Matching& M, const std::vector<int>& side,
                                            bool rightmost)
{
    std::optional<Flip> best;
    auto key = [&](const Flip& f) {
        const Coord& a = M.red(f.i).x;
        const Coord& b = M.red(f.j).x;
        return rightmost ? std::make_pair(std::max(a, b), std::min(a, b))
                         : std::make_pair(-std::min(a, b), -std::max(a, b));
    };
    for (std::size_t x = 0; x < side.size(); ++x)
        for (std::size_t y = x + 1; y < side.size(); ++y) {
            const Flip f{side[x], side[y]};
            if (M.crosses(f.i, f.j) && (!best || key(f) > key(*best)))
                best = f;
        }
    return best;
}

inline void scripted_push(FlipSequence& seq, const std::optional<Flip>& f, const char* what)
{
    if (!f || !seq.end.crosses(f->i, f->j))
        throw Error(ErrorCode::ScriptInvalidated, what);
    seq.push(*f);
}

} // namespace detail

inline FlipSequence scripted_butterfly_sequence(const Matching& bf, std::size_t m)
{
    if (bf.n() != 2 * m)
        throw Error(ErrorCode::InvalidArgument, "matching is not an m-butterfly");
    FlipSequence seq(bf);
    std::vector<int> right_reds, left_reds; // r_i are right of the origin, r'_i left
    for (std::size_t i = 0; i < m; ++i) {
        right_reds.push_back(static_cast<int>(i));
        left_reds.push_back(static_cast<int>(m + i));
    }
    auto bubble = [&](std::vector<int> side) {
        std::sort(side.begin(), side.end(),
                  [&](int a, int b) { return bf.red(a).x < bf.red(b).x; });
        for (std::size_t pass = 0; pass + 1 < side.size(); ++pass)
            for (std::size_t t = 0; t + 1 < side.size() - pass; ++t)
                if (seq.end.crosses(side[t], side[t + 1]))
                    seq.push(Flip{side[t], side[t + 1]});
    };
    bubble(left_reds);
    bubble(right_reds);
    if (seq.length() != m * (m - 1))
        throw Error(ErrorCode::ScriptInvalidated, "star phase did not take 2*C(m,2) flips");
    for (std::size_t round = 0; round < m; ++round) {
        detail::scripted_push(seq, Flip{0, static_cast<int>(m)}, "innermost pair does not cross");
        for (std::size_t t = 0; t + 1 < m; ++t)
            detail::scripted_push(seq, detail::extreme_crossing(seq.end, left_reds, true),
                                  "left sweep found no crossing");
        for (std::size_t t = 0; t + 1 < m; ++t)
            detail::scripted_push(seq, detail::extreme_crossing(seq.end, right_reds, false),
                                  "right sweep found no crossing");
    }
    if (!seq.complete())
        throw Error(ErrorCode::ScriptInvalidated, "script did not end crossing-free");
    return seq;
}

struct FenceLabel {
    char side = 'p'; // 'p' or 'q'
    int index = 1;
};

struct FenceDescriptor {
    std::size_t m = 0;
    std::vector<FenceLabel> red_labels;  // per red id
    std::vector<FenceLabel> blue_labels; // per blue id
    std::vector<Point> reds;
    std::vector<Point> blues;
    std::map<int, std::vector<std::pair<Color, int>>> columns; // column -> (color, id)

    static int column(int index) { return (index + 1) / 2; }
};

enum class CrossingKind { End, Middle };

inline std::pair<Matching, FenceDescriptor> make_fence(std::size_t m)
{
    if (m < 2)
        throw Error(ErrorCode::InvalidArgument, "fence needs m >= 2");
    const int M = static_cast<int>(m);
    std::vector<int> idx = {1};
    for (int i = 3; i <= 2 * M; ++i)
        idx.push_back(i);
    idx.push_back(2 * M + 2);
    auto is_red = [](int i) { return i % 4 == 1 || i % 4 == 2; };

    FenceDescriptor d;
    d.m = m;
    std::map<std::pair<char, int>, std::pair<Color, int>> where;
    auto place = [&](char side, int index, long x) {
        Point p{Coord(x), Coord(x * x), is_red(index) ? Color::Red : Color::Blue};
        if (p.color == Color::Red) {
            where[{side, index}] = {Color::Red, static_cast<int>(d.reds.size())};
            d.reds.push_back(p);
            d.red_labels.push_back({side, index});
        } else {
            where[{side, index}] = {Color::Blue, static_cast<int>(d.blues.size())};
            d.blues.push_back(p);
            d.blue_labels.push_back({side, index});
        }
        d.columns[FenceDescriptor::column(index)].push_back(where[{side, index}]);
    };
    // Counter-clockwise on y = x^2 is increasing x: q's descend to the left, p's ascend to the right.
    for (std::size_t t = 0; t < idx.size(); ++t) {
        place('q', idx[t], -static_cast<long>(t) - 1);
        place('p', idx[t], static_cast<long>(t) + 1);
    }
    std::vector<int> mate(d.reds.size(), -1);
    auto join = [&](std::pair<char, int> a, std::pair<char, int> b) {
        auto pa = where.at(a), pb = where.at(b);
        if (pa.first == Color::Blue)
            std::swap(pa, pb);
        mate[pa.second] = pb.second;
    };
    for (int i = 1; i <= 2 * M - 1; i += 2) {
        join({'p', i}, {'q', i + 3});
        join({'q', i}, {'p', i + 3});
    }
    Matching fence(d.reds, d.blues, mate);
    return {std::move(fence), std::move(d)};
}

namespace detail {

inline void check_fence_points(const Matching& M, const FenceDescriptor& d)
{
    if (M.points().reds() != d.reds || M.points().blues() != d.blues)
        throw Error(ErrorCode::WrongPointSet, "matching is not on the fence point set");
}

struct FenceEnds {
    FenceLabel red_end;
    FenceLabel blue_end;
};

inline FenceEnds fence_ends(const Matching& M, const FenceDescriptor& d, std::size_t i)
{
    return {d.red_labels[i], d.blue_labels[M.mate(i)]};
}

} // namespace detail

inline bool is_derived_fence(const Matching& M, const FenceDescriptor& d)
{
    detail::check_fence_points(M, d);
    // partner column of every labelled point
    std::map<std::pair<char, int>, int> partner_col;
    std::map<std::pair<char, int>, int> seg_of;
    for (std::size_t i = 0; i < M.n(); ++i) {
        const auto e = detail::fence_ends(M, d, i);
        partner_col[{e.red_end.side, e.red_end.index}] = FenceDescriptor::column(e.blue_end.index);
        partner_col[{e.blue_end.side, e.blue_end.index}] = FenceDescriptor::column(e.red_end.index);
    }
    for (int k = 2; k <= static_cast<int>(d.m); ++k)
        for (char w : {'p', 'q'}) {
            const int a = partner_col.at({w, 2 * k - 1});
            const int b = partner_col.at({w, 2 * k});
            const bool st1 = a == k - 1 && b == k + 1;
            const bool st2 = a == k + 1 && b == k - 1;
            if (!st1 && !st2)
                return false;
        }
    return true;
}

inline CrossingKind classify_crossing(const Matching& M, const FenceDescriptor& d, std::size_t i,
                                      std::size_t j)
{
    detail::check_fence_points(M, d);
    if (!M.crosses(i, j))
        throw Error(ErrorCode::InvalidArgument, "pair does not cross");
    const auto ei = detail::fence_ends(M, d, i), ej = detail::fence_ends(M, d, j);
    auto col = [](const FenceLabel& l) { return FenceDescriptor::column(l.index); };
    // End: the segments at w_{2k-1} and w_{2k} with statement 2.
    for (int k = 2; k <= static_cast<int>(d.m); ++k)
        for (char w : {'p', 'q'}) {
            auto end_at = [&](const detail::FenceEnds& e, int index, FenceLabel& other) {
                if (e.red_end.side == w && e.red_end.index == index) {
                    other = e.blue_end;
                    return true;
                }
                if (e.blue_end.side == w && e.blue_end.index == index) {
                    other = e.red_end;
                    return true;
                }
                return false;
            };
            FenceLabel oi, oj;
            for (int swap = 0; swap < 2; ++swap) {
                const auto& A = swap ? ej : ei;
                const auto& B = swap ? ei : ej;
                if (end_at(A, 2 * k - 1, oi) && end_at(B, 2 * k, oj) && col(oi) == k + 1 &&
                    col(oj) == k - 1)
                    return CrossingKind::End;
            }
        }
    // Middle: {p_a q_b, q_a' p_b'} with a,a' and b,b' column-mates.
    auto split = [](const detail::FenceEnds& e, FenceLabel& p, FenceLabel& q) {
        if (e.red_end.side == e.blue_end.side)
            return false;
        p = e.red_end.side == 'p' ? e.red_end : e.blue_end;
        q = e.red_end.side == 'q' ? e.red_end : e.blue_end;
        return true;
    };
    FenceLabel pi, qi, pj, qj;
    if (split(ei, pi, qi) && split(ej, pj, qj) && col(pi) == col(qj) && col(qi) == col(pj))
        return CrossingKind::Middle;
    throw Error(ErrorCode::UnclassifiableCrossing,
                "crossing " + std::to_string(i) + "," + std::to_string(j) + " is neither end nor middle");
}

enum class SampleKind { RedOnLine, Convex, General };

inline Matching sample_random(SampleKind kind, std::size_t n, std::uint64_t seed)
{
    if (n == 0)
        throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
    std::mt19937_64 rng(seed);
    const long N = static_cast<long>(n);
    auto uniform = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
    auto distinct = [&](std::size_t count, long lo, long hi) {
        std::vector<long> pool;
        for (long v = lo; v <= hi; ++v)
            pool.push_back(v);
        std::shuffle(pool.begin(), pool.end(), rng);
        pool.resize(count);
        return pool;
    };
    for (;;) {
        std::vector<Point> reds, blues;
        if (kind == SampleKind::RedOnLine) {
            for (long x : distinct(n, 0, 4 * N))
                reds.push_back(red(Coord(x), 0));
            const auto ys = distinct(n, 1, 4 * N);
            for (std::size_t j = 0; j < n; ++j)
                blues.push_back(blue(Coord(uniform(-2 * N, 6 * N)), Coord(ys[j])));
        } else if (kind == SampleKind::Convex) {
            const auto xs = distinct(2 * n, -3 * N, 3 * N);
            std::vector<int> colors(2 * n, 0);
            std::fill(colors.begin() + static_cast<long>(n), colors.end(), 1);
            std::shuffle(colors.begin(), colors.end(), rng);
            for (std::size_t t = 0; t < 2 * n; ++t) {
                Point p{Coord(xs[t]), Coord(xs[t] * xs[t]), colors[t] ? Color::Blue : Color::Red};
                (colors[t] ? blues : reds).push_back(p);
            }
        } else {
            const auto cells = distinct(2 * n, 0, 64 * N * N - 1);
            for (std::size_t t = 0; t < 2 * n; ++t) {
                Point p{Coord(cells[t] % (8 * N)), Coord(cells[t] / (8 * N)),
                        t < n ? Color::Red : Color::Blue};
                (t < n ? reds : blues).push_back(p);
            }
        }
        std::vector<int> mate(n);
        std::iota(mate.begin(), mate.end(), 0);
        std::shuffle(mate.begin(), mate.end(), rng);
        Matching M(std::move(reds), std::move(blues), std::move(mate));
        if (M.general_position(kind == SampleKind::RedOnLine).valid)
            return M;
    }
}

} // namespace untangle

#endif

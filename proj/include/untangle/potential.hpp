#ifndef UNTANGLE_POTENTIAL_HPP
#define UNTANGLE_POTENTIAL_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "matching.hpp"

namespace untangle {

// Red-on-a-line analyses index reds by x-rank: rank 0 is the leftmost red.
inline std::vector<std::size_t> red_ranks(const Matching& M)
{
    std::vector<std::size_t> order(M.n());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return M.red(a).x < M.red(b).x; });
    std::vector<std::size_t> rank(M.n());
    for (std::size_t r = 0; r < order.size(); ++r)
        rank[order[r]] = r;
    return rank;
}

inline Coord default_line_y(const Matching& M)
{
    Coord top = 0;
    for (const auto& p : M.points().blues())
        top = std::max(top, p.y);
    for (const auto& p : M.points().reds())
        top = std::max(top, p.y);
    return top + 1;
}

struct ProjectedConfig {
    std::size_t k = 0;
    Coord line_y;
    std::vector<Coord> images; // images[j] = projected x of blue j
};

inline ProjectedConfig project_tk(const Matching& M, std::size_t k, const Coord& line_y)
{
    require_red_on_line(M);
    for (const auto& b : M.points().blues())
        if (line_y <= b.y)
            throw Error(ErrorCode::LineNotAbove, "projection line must be above every point");
    ProjectedConfig pc{k, line_y, {}};
    const Coord& xk = M.red(k).x;
    for (const auto& b : M.points().blues())
        pc.images.push_back(xk + (b.x - xk) * line_y / b.y);
    return pc;
}

inline ProjectedConfig project_tk(const Matching& M, std::size_t k)
{
    return project_tk(M, k, default_line_y(M));
}

namespace detail {

inline bool observed_cross(const Matching& M, const ProjectedConfig& pc, std::size_t i,
                           std::size_t j)
{
    const Coord& ti = pc.images[M.mate(i)];
    const Coord& tj = pc.images[M.mate(j)];
    if (ti == tj)
        throw Error(ErrorCode::ProjectedTie, "two blue points project to the same image");
    return (M.red(i).x < M.red(j).x) != (ti < tj);
}

} // namespace detail

// Images of (r_i, b_i) and (r_j, b_j) cross on the projection line iff their order flips.
inline bool k_observed_crossing(const Matching& M, std::size_t k, std::size_t i, std::size_t j,
                                std::optional<Coord> line_y = std::nullopt)
{
    if (i == j)
        throw Error(ErrorCode::NotAKPair, "a k-pair needs two distinct segments");
    const auto rank = red_ranks(M);
    const std::size_t lo = std::min(rank[i], rank[j]), hi = std::max(rank[i], rank[j]);
    if (!(lo <= rank[k] && rank[k] <= hi))
        throw Error(ErrorCode::NotAKPair, "pair does not straddle the focal red");
    const auto pc = project_tk(M, k, line_y ? *line_y : default_line_y(M));
    return detail::observed_cross(M, pc, i, j);
}

inline std::size_t phi_k(const Matching& M, std::size_t k, std::optional<Coord> line_y = std::nullopt)
{
    const auto pc = project_tk(M, k, line_y ? *line_y : default_line_y(M));
    const auto rank = red_ranks(M);
    std::size_t c = 0;
    for (std::size_t i = 0; i < M.n(); ++i)
        for (std::size_t j = i + 1; j < M.n(); ++j) {
            const std::size_t lo = std::min(rank[i], rank[j]), hi = std::max(rank[i], rank[j]);
            if (lo <= rank[k] && rank[k] <= hi)
                c += detail::observed_cross(M, pc, i, j);
        }
    return c;
}

// Rank-based bound for the focal red of 1-based rank k: k(n+1) - k^2 - 1.
inline std::size_t phi_k_bound(std::size_t n, std::size_t k1)
{
    return k1 * (n + 1) - k1 * k1 - 1;
}

inline std::string inversion_word(const Matching& M, std::size_t k,
                                  std::optional<Coord> line_y = std::nullopt)
{
    const auto pc = project_tk(M, k, line_y ? *line_y : default_line_y(M));
    std::vector<std::size_t> reds(M.n());
    std::iota(reds.begin(), reds.end(), 0);
    std::sort(reds.begin(), reds.end(), [&](std::size_t a, std::size_t b) {
        return pc.images[M.mate(a)] < pc.images[M.mate(b)];
    });
    for (std::size_t t = 1; t < reds.size(); ++t)
        if (pc.images[M.mate(reds[t])] == pc.images[M.mate(reds[t - 1])])
            throw Error(ErrorCode::ProjectedTie, "two blue points project to the same image");
    std::string w;
    for (std::size_t r : reds)
        w += r == k ? 'C' : (M.red(r).x < M.red(k).x ? 'L' : 'R');
    return w;
}

inline std::size_t count_inversions(const std::string& w)
{
    auto rank = [](char c) { return c == 'L' ? 0 : c == 'C' ? 1 : 2; };
    std::size_t c = 0;
    for (std::size_t a = 0; a < w.size(); ++a)
        for (std::size_t b = a + 1; b < w.size(); ++b)
            c += rank(w[b]) < rank(w[a]);
    return c;
}

inline std::size_t phi_total(const Matching& M, std::optional<Coord> line_y = std::nullopt)
{
    std::size_t s = 0;
    for (std::size_t k = 0; k < M.n(); ++k)
        s += phi_k(M, k, line_y);
    return s;
}

// C(n,2)(n+4)/3 = n(n-1)(n+4)/6, always an integer.
inline std::size_t phi_total_bound(std::size_t n) { return n * (n - 1) * (n + 4) / 6; }

// A flip (i,j) is a k-flip when the focal red's rank lies between theirs.
inline bool is_k_flip(const Matching& M, const Flip& f, std::size_t k)
{
    const auto rank = red_ranks(M);
    const std::size_t lo = std::min(rank[f.i], rank[f.j]), hi = std::max(rank[f.i], rank[f.j]);
    return lo <= rank[k] && rank[k] <= hi;
}

} // namespace untangle

#endif

#ifndef UNTANGLE_TRACKING_HPP
#define UNTANGLE_TRACKING_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "matching.hpp"

namespace untangle {

// Flip (i,j): s1 = (r_i, b_{mate i}), s2 = (r_j, b_{mate j});
// afterwards s1' = (r_i, b_{mate j}) and s2' = (r_j, b_{mate i}).
struct SpectatorProfile {
    std::size_t s = 0;
    std::array<PairState, 2> before{}; // (s,s1), (s,s2)
    std::array<PairState, 2> after{};  // (s,s1'), (s,s2')
};

enum class TrackingChoice { Straight, Swapped };

inline SpectatorProfile spectator_profile(const Matching& M, const Flip& f, std::size_t s)
{
    if (s == static_cast<std::size_t>(f.i) || s == static_cast<std::size_t>(f.j))
        throw Error(ErrorCode::SpectatorIsFlipping, "spectator is one of the flipped segments");
    if (!M.crosses(f.i, f.j))
        throw Error(ErrorCode::NotCrossing, "flip pair does not cross");
    SpectatorProfile p;
    p.s = s;
    const std::size_t bi = M.mate(f.i), bj = M.mate(f.j), bs = M.mate(s);
    p.before[0] = pair_state_with(M, s, bs, f.i, bi);
    p.before[1] = pair_state_with(M, s, bs, f.j, bj);
    p.after[0] = pair_state_with(M, s, bs, f.i, bj);
    p.after[1] = pair_state_with(M, s, bs, f.j, bi);
    return p;
}

// Target states of (s,s1),(s,s2) under a choice.
inline std::array<PairState, 2> mapped(const SpectatorProfile& p, TrackingChoice c)
{
    if (c == TrackingChoice::Straight)
        return {p.after[0], p.after[1]};
    return {p.after[1], p.after[0]};
}

inline bool avoids(const SpectatorProfile& p, TrackingChoice c, bool avoid_t)
{
    const auto to = mapped(p, c);
    for (int k = 0; k < 2; ++k) {
        if (p.before[k] != PairState::H)
            continue;
        if (to[k] == PairState::X || (avoid_t && to[k] == PairState::T))
            return false;
    }
    return true;
}

inline TrackingChoice choose_avoid_HX(const SpectatorProfile& p)
{
    if (avoids(p, TrackingChoice::Straight, false))
        return TrackingChoice::Straight;
    if (avoids(p, TrackingChoice::Swapped, false))
        return TrackingChoice::Swapped;
    throw Error(ErrorCode::NoValidChoice, "no tracking choice avoids H->X");
}

// Region beyond the apex between the extensions of (left, apex) and (right, apex).
struct UpperCone {
    Point apex;
    Point left_red;
    Point right_red;
};

inline bool upper_cone_contains(const UpperCone& c, const Point& p)
{
    const int a = orient_sign(c.left_red, c.apex, p);
    const int a_ref = orient_sign(c.left_red, c.apex, c.right_red);
    const int b = orient_sign(c.right_red, c.apex, p);
    const int b_ref = orient_sign(c.right_red, c.apex, c.left_red);
    return a != 0 && b != 0 && a == -a_ref && b == -b_ref;
}

struct ConeObstruction {
    int cone = 0; // 0: cone of s1,s2' at b_{mate i}; 1: cone of s2,s1' at b_{mate j}
};

struct HXHTChoice {
    std::optional<TrackingChoice> choice;
    std::optional<ConeObstruction> obstruction;
};

inline std::array<UpperCone, 2> flip_cones(const Matching& M, const Flip& f)
{
    const Point& ri = M.red(f.i);
    const Point& rj = M.red(f.j);
    auto cone = [](const Point& apex, const Point& r1, const Point& r2) {
        return r1.x < r2.x ? UpperCone{apex, r1, r2} : UpperCone{apex, r2, r1};
    };
    return {cone(M.blue_of(f.i), ri, rj), cone(M.blue_of(f.j), ri, rj)};
}

inline HXHTChoice choose_avoid_HX_HT(const Matching& M, const Flip& f, std::size_t s)
{
    require_red_on_line(M);
    const auto cones = flip_cones(M, f);
    const Point& b = M.blue_of(s);
    for (int c = 0; c < 2; ++c)
        if (upper_cone_contains(cones[c], b))
            return HXHTChoice{std::nullopt, ConeObstruction{c}};
    const auto p = spectator_profile(M, f, s);
    for (auto c : {TrackingChoice::Straight, TrackingChoice::Swapped})
        if (avoids(p, c, true))
            return HXHTChoice{c, std::nullopt};
    throw Error(ErrorCode::NoValidChoice, "b outside both cones but no choice avoids H->X and H->T");
}

struct TransitionEvent {
    std::size_t step = 0;
    std::size_t pair_id = 0;
    std::size_t spectator = 0;
    PairState from = PairState::H;
    PairState to = PairState::T;
    std::optional<ConeObstruction> cone;
};

struct TrackResult {
    std::vector<std::pair<int, int>> pair_ids;        // initial segment pair of each id
    std::vector<std::vector<PairState>> trajectories; // per id, steps + 1 states
    std::map<std::string, std::size_t> transitions;   // "HX" -> count, per step and tracked id
    std::vector<TransitionEvent> h_to_t;
    std::vector<TransitionEvent> h_to_x;

    std::size_t count(PairState a, PairState b) const
    {
        auto it = transitions.find(std::string{to_char(a), to_char(b)});
        return it == transitions.end() ? 0 : it->second;
    }
};

inline TrackResult track_sequence(const Matching& M, const std::vector<Flip>& steps)
{
    const std::size_t n = M.n();
    const bool rol = is_red_on_line(M);
    TrackResult out;
    // where[id] = current unordered segment pair carried by id
    std::vector<std::pair<int, int>> where;
    std::map<std::pair<int, int>, std::size_t> id_of;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            id_of[{static_cast<int>(i), static_cast<int>(j)}] = where.size();
            where.emplace_back(static_cast<int>(i), static_cast<int>(j));
        }
    out.pair_ids = where;
    out.trajectories.resize(where.size());
    for (std::size_t id = 0; id < where.size(); ++id)
        out.trajectories[id].push_back(pair_state(M, where[id].first, where[id].second));

    auto norm = [](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
    Matching cur = M;
    for (std::size_t t = 0; t < steps.size(); ++t) {
        const Flip f = steps[t];
        if (!cur.crosses(f.i, f.j))
            throw Error(ErrorCode::NotCrossing, "step " + std::to_string(t) + " is not a crossing pair");
        std::vector<std::optional<ConeObstruction>> witness(n);
        std::vector<TrackingChoice> choice(n, TrackingChoice::Straight);
        for (std::size_t s = 0; s < n; ++s) {
            if (s == static_cast<std::size_t>(f.i) || s == static_cast<std::size_t>(f.j))
                continue;
            std::optional<TrackingChoice> c;
            if (rol) {
                const auto r = choose_avoid_HX_HT(cur, f, s);
                c = r.choice;
                witness[s] = r.obstruction;
            }
            choice[s] = c ? *c : choose_avoid_HX(spectator_profile(cur, f, s));
        }
        // Swapped: the id on (s,i) moves to (s,j) and vice versa.
        std::vector<std::pair<int, int>> next = where;
        for (std::size_t id = 0; id < where.size(); ++id) {
            auto [a, b] = where[id];
            int s = -1, other = -1;
            if (a == f.i || a == f.j) {
                s = b;
                other = a;
            }
            if (b == f.i || b == f.j) {
                if (s >= 0)
                    continue; // the flipped pair itself
                s = a;
                other = b;
            }
            if (s < 0 || choice[s] == TrackingChoice::Straight)
                continue;
            next[id] = norm(s, other == f.i ? f.j : f.i);
        }
        where = std::move(next);
        const Matching nxt = apply_flip(cur, f);
        for (std::size_t id = 0; id < where.size(); ++id) {
            const PairState from = out.trajectories[id].back();
            const PairState to = pair_state(nxt, where[id].first, where[id].second);
            out.trajectories[id].push_back(to);
            out.transitions[std::string{to_char(from), to_char(to)}]++;
            if (from == PairState::H && to != PairState::H) {
                auto [a, b] = where[id];
                const bool touches = a == f.i || a == f.j || b == f.i || b == f.j;
                std::size_t spec = touches ? static_cast<std::size_t>(a == f.i || a == f.j ? b : a) : 0;
                TransitionEvent ev{t, id, spec, from, to,
                                   touches && spec < n ? witness[spec] : std::nullopt};
                (to == PairState::T ? out.h_to_t : out.h_to_x).push_back(ev);
            }
        }
        cur = nxt;
    }
    return out;
}

} // namespace untangle

#endif

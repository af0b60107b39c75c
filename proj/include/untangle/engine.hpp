#ifndef UNTANGLE_ENGINE_HPP
#define UNTANGLE_ENGINE_HPP

#include <gmpxx.h>

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "matching.hpp"

namespace untangle {

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

struct FlipSequence {
    Matching start;
    std::vector<Flip> steps;
    Matching end;

    explicit FlipSequence(Matching m) : start(m), end(std::move(m)) {}

    std::size_t length() const { return steps.size(); }

    void push(const Flip& f)
    {
        end = apply_flip(end, f);
        steps.push_back(f);
    }

    bool complete() const { return is_crossing_free(end); }
};

struct SearchResult {
    std::size_t length = 0;
    FlipSequence witness;
    std::uint64_t explored = 0;
};

// Greedy on sub-matching `sub` whose red k is parent red ids[k]; flips are logged in parent ids.
inline void greedy_rec(const Matching& sub, const std::vector<int>& ids, FlipSequence& out)
{
    Matching cur = sub;
    std::vector<Flip> local;
    for (;;) {
        const std::size_t s1 = top_segment(cur);
        std::optional<std::size_t> s2;
        for (std::size_t j = 0; j < cur.n(); ++j)
            if (j != s1 && cur.crosses(s1, j) && (!s2 || cur.blue_of(j).y > cur.blue_of(*s2).y))
                s2 = j;
        if (!s2)
            break;
        const Flip f{static_cast<int>(s1), static_cast<int>(*s2)};
        cur = apply_flip(cur, f);
        out.push(Flip{ids[f.i], ids[f.j]});
    }
    const std::size_t s1 = top_segment(cur);
    const SideSplit parts = side_split(cur, s1);
    for (const SubMatching* p : {&parts.left, &parts.right}) {
        if (p->empty())
            continue;
        std::vector<int> pid;
        for (int k : p->red_ids)
            pid.push_back(ids[k]);
        greedy_rec(*p->matching, pid, out);
    }
}

inline FlipSequence run_greedy_top(const Matching& M)
{
    FlipSequence seq(M);
    std::vector<int> ids(M.n());
    std::iota(ids.begin(), ids.end(), 0);
    greedy_rec(M, ids, seq);
    return seq;
}

struct Policy {
    enum Kind { FirstFound, Random, TopMost } kind = FirstFound;
    std::uint64_t seed = 0;

    static Policy first_found() { return Policy{FirstFound, 0}; }
    static Policy random(std::uint64_t seed) { return Policy{Random, seed}; }
    static Policy top_most() { return Policy{TopMost, 0}; }
};

inline FlipSequence run_policy(const Matching& M, const Policy& policy)
{
    FlipSequence seq(M);
    std::mt19937_64 rng(policy.seed);
    for (;;) {
        const auto pairs = crossing_pairs(seq.end);
        if (pairs.empty())
            break;
        std::pair<int, int> pick = pairs.front();
        if (policy.kind == Policy::Random) {
            std::uniform_int_distribution<std::size_t> d(0, pairs.size() - 1);
            pick = pairs[d(rng)];
        } else if (policy.kind == Policy::TopMost) {
            const Matching& cur = seq.end;
            auto higher = [&](int a, int b) {
                const Coord& ya = cur.blue_of(a).y;
                const Coord& yb = cur.blue_of(b).y;
                return ya > yb || (ya == yb && a < b);
            };
            int s1 = -1;
            for (const auto& [a, b] : pairs)
                for (int c : {a, b})
                    if (s1 < 0 || higher(c, s1))
                        s1 = c;
            int s2 = -1;
            for (std::size_t j = 0; j < cur.n(); ++j)
                if (static_cast<int>(j) != s1 && cur.crosses(s1, j) &&
                    (s2 < 0 || higher(static_cast<int>(j), s2)))
                    s2 = static_cast<int>(j);
            pick = {s1, s2};
        }
        seq.push(Flip{pick.first, pick.second});
    }
    return seq;
}

inline std::vector<Flip> available_flips(const Matching& M)
{
    std::vector<Flip> out;
    for (const auto& [i, j] : crossing_pairs(M))
        out.push_back(Flip{i, j});
    return out;
}

inline Error budget_error(std::uint64_t explored)
{
    return Error(ErrorCode::BudgetExhausted,
                 "explored " + std::to_string(explored) + " configurations");
}

inline SearchResult shortest_untangle(const Matching& M, std::uint64_t budget = kDefaultBudget)
{
    struct Node {
        std::string parent;
        Flip via;
    };
    std::unordered_map<std::string, Node> seen;
    std::deque<Matching> queue;
    seen.emplace(M.key(), Node{std::string(), Flip{}});
    queue.push_back(M);
    std::uint64_t explored = 0;
    while (!queue.empty()) {
        Matching cur = std::move(queue.front());
        queue.pop_front();
        if (++explored > budget)
            throw budget_error(explored - 1);
        const auto flips = available_flips(cur);
        if (flips.empty()) {
            std::vector<Flip> rev;
            std::string k = cur.key();
            while (k != M.key()) {
                const Node& nd = seen.at(k);
                rev.push_back(nd.via);
                k = nd.parent;
            }
            FlipSequence w(M);
            for (auto it = rev.rbegin(); it != rev.rend(); ++it)
                w.push(*it);
            return SearchResult{w.length(), std::move(w), explored};
        }
        const std::string ck = cur.key();
        for (const Flip& f : flips) {
            Matching nx = apply_flip(cur, f);
            auto [it, fresh] = seen.emplace(nx.key(), Node{ck, f});
            if (fresh)
                queue.push_back(std::move(nx));
        }
    }
    throw Error(ErrorCode::InvalidArgument, "no crossing-free configuration reached");
}

namespace detail {

struct LongestMemo {
    std::unordered_map<std::string, std::pair<int, Flip>> table;
    std::uint64_t budget;
    std::uint64_t explored = 0;

    int solve(const Matching& cur)
    {
        const std::string k = cur.key();
        if (auto it = table.find(k); it != table.end())
            return it->second.first;
        if (++explored > budget)
            throw budget_error(explored - 1);
        int best = 0;
        Flip arg{};
        for (const Flip& f : available_flips(cur)) {
            const int v = 1 + solve(apply_flip(cur, f));
            if (v > best) {
                best = v;
                arg = f;
            }
        }
        table.emplace(k, std::make_pair(best, arg));
        return best;
    }
};

} // namespace detail

inline SearchResult longest_untangle(const Matching& M, std::uint64_t budget = kDefaultBudget)
{
    detail::LongestMemo memo{{}, budget};
    const int len = memo.solve(M);
    FlipSequence w(M);
    while (static_cast<int>(w.length()) < len)
        w.push(memo.table.at(w.end.key()).second);
    return SearchResult{static_cast<std::size_t>(len), std::move(w), memo.explored};
}

struct Enumeration {
    std::vector<std::vector<Flip>> sequences;
    bool truncated = false;
};

// Calls `emit` on every maximal flip sequence; stops when emit returns false.
inline bool for_each_sequence(const Matching& M,
                              const std::function<bool(const std::vector<Flip>&, const Matching&)>& emit)
{
    std::vector<Flip> path;
    std::function<bool(const Matching&)> rec = [&](const Matching& cur) {
        const auto flips = available_flips(cur);
        if (flips.empty())
            return emit(path, cur);
        for (const Flip& f : flips) {
            path.push_back(f);
            const bool go = rec(apply_flip(cur, f));
            path.pop_back();
            if (!go)
                return false;
        }
        return true;
    };
    return rec(M);
}

inline Enumeration enumerate_sequences(const Matching& M, std::uint64_t limit)
{
    Enumeration e;
    for_each_sequence(M, [&](const std::vector<Flip>& seq, const Matching&) {
        if (e.sequences.size() >= limit) {
            e.truncated = true;
            return false;
        }
        e.sequences.push_back(seq);
        return true;
    });
    return e;
}

// Aggregate over all maximal sequences without listing them: counts per (length, end).
struct SequenceSummary {
    mpz_class count = 0;
    std::map<std::size_t, mpz_class> lengths;
    std::set<std::string> ends; // end keys
    std::uint64_t configurations = 0;

    std::size_t min_length() const { return lengths.empty() ? 0 : lengths.begin()->first; }
    std::size_t max_length() const { return lengths.empty() ? 0 : lengths.rbegin()->first; }
};

inline SequenceSummary summarize_sequences(const Matching& M, std::uint64_t budget = kDefaultBudget)
{
    using Table = std::map<std::pair<std::size_t, std::string>, mpz_class>;
    std::unordered_map<std::string, Table> memo;
    std::uint64_t explored = 0;
    std::function<const Table&(const Matching&)> rec = [&](const Matching& cur) -> const Table& {
        const std::string k = cur.key();
        if (auto it = memo.find(k); it != memo.end())
            return it->second;
        if (++explored > budget)
            throw budget_error(explored - 1);
        Table t;
        const auto flips = available_flips(cur);
        if (flips.empty())
            t[{0, k}] = 1;
        for (const Flip& f : flips)
            for (const auto& [le, c] : rec(apply_flip(cur, f)))
                t[{le.first + 1, le.second}] += c;
        return memo.emplace(k, std::move(t)).first->second;
    };
    SequenceSummary s;
    for (const auto& [le, c] : rec(M)) {
        s.count += c;
        s.lengths[le.first] += c;
        s.ends.insert(le.second);
    }
    s.configurations = explored;
    return s;
}

struct VerificationReport {
    bool valid = true;
    std::optional<std::size_t> first_invalid;
    std::size_t final_crossings = 0;
    std::vector<long> crossing_deltas;
    bool complete = false;
};

inline VerificationReport verify_sequence(const Matching& M, const std::vector<Flip>& steps)
{
    VerificationReport r;
    Matching cur = M;
    long before = static_cast<long>(crossing_count(cur));
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const Flip& f = steps[k];
        const bool in_range = f.i != f.j && f.i >= 0 && f.j >= 0 &&
                              static_cast<std::size_t>(f.i) < cur.n() &&
                              static_cast<std::size_t>(f.j) < cur.n();
        if (!in_range || !cur.crosses(f.i, f.j)) {
            r.valid = false;
            r.first_invalid = k;
            break;
        }
        cur = apply_flip(cur, f);
        const long after = static_cast<long>(crossing_count(cur));
        r.crossing_deltas.push_back(after - before);
        before = after;
    }
    r.final_crossings = static_cast<std::size_t>(before);
    r.complete = r.valid && before == 0;
    return r;
}

} // namespace untangle

#endif

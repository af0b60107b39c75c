#include <gtest/gtest.h>

#include <set>

#include "untangle/generators.hpp"

using namespace untangle;

namespace {

Point R(long x, long y) { return red(Coord(x), Coord(y)); }
Point B(long x, long y) { return blue(Coord(x), Coord(y)); }

Matching x_shape_on_line()
{
    return Matching({R(0, 0), R(1, 0)}, {B(1, 1), B(0, 2)}, {0, 1});
}

std::size_t choose2(std::size_t n) { return n * (n - 1) / 2; }

// Plain DFS without memo, for cross-checking.
std::size_t naive_longest(const Matching& M)
{
    std::size_t best = 0;
    for (const Flip& f : available_flips(M))
        best = std::max(best, 1 + naive_longest(apply_flip(M, f)));
    return best;
}

std::size_t naive_shortest(const Matching& M)
{
    const auto flips = available_flips(M);
    if (flips.empty())
        return 0;
    std::size_t best = SIZE_MAX;
    for (const Flip& f : flips)
        best = std::min(best, 1 + naive_shortest(apply_flip(M, f)));
    return best;
}

} // namespace

TEST(Greedy, Examples)
{
    EXPECT_EQ(run_greedy_top(x_shape_on_line()).length(), 1u);
    const Matching bf = make_butterfly(3, true);
    const FlipSequence g = run_greedy_top(bf);
    EXPECT_LE(g.length(), nonH_count(bf));
    EXPECT_EQ(nonH_count(bf), 15u);
    EXPECT_TRUE(verify_sequence(bf, g.steps).complete);
    const Matching star = make_star(5);
    const FlipSequence gs = run_greedy_top(star);
    EXPECT_LE(gs.length(), 10u);
    EXPECT_TRUE(verify_sequence(star, gs.steps).complete);
}

TEST(Greedy, PropagatesTopSegmentErrors)
{
    try {
        run_greedy_top(make_butterfly(3, false));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TiedBlueHeights);
    }
    EXPECT_THROW(run_greedy_top(sample_random(SampleKind::General, 4, 1)), Error);
}

TEST(Greedy, BoundedByNonHOnRandomInstances)
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Matching M = sample_random(SampleKind::RedOnLine, 2 + seed % 9, seed);
        const FlipSequence g = run_greedy_top(M);
        EXPECT_LE(g.length(), nonH_count(M));
        EXPECT_TRUE(verify_sequence(M, g.steps).complete);
    }
}

TEST(Policy, Examples)
{
    const Matching free_m({R(0, 0), R(1, 0)}, {B(0, 1), B(1, 1)}, {0, 1});
    EXPECT_EQ(run_policy(free_m, Policy::first_found()).length(), 0u);
    const Matching fence = make_fence(2).first;
    for (const Policy& p : {Policy::first_found(), Policy::top_most(), Policy::random(0),
                            Policy::random(7)})
        EXPECT_EQ(run_policy(fence, p).length(), 4u);
    EXPECT_LE(run_policy(make_star(4), Policy::random(0)).length(), 6u);
}

TEST(Policy, RandomIsDeterministicPerSeed)
{
    const Matching M = sample_random(SampleKind::General, 7, 3);
    EXPECT_EQ(run_policy(M, Policy::random(5)).steps, run_policy(M, Policy::random(5)).steps);
}

TEST(Shortest, Examples)
{
    EXPECT_EQ(shortest_untangle(x_shape_on_line()).length, 1u);
    const Matching free_m({R(0, 0), R(1, 0)}, {B(0, 1), B(1, 1)}, {0, 1});
    EXPECT_EQ(shortest_untangle(free_m).length, 0u);
    const auto r = shortest_untangle(make_star(4));
    EXPECT_TRUE(verify_sequence(make_star(4), r.witness.steps).complete);
    EXPECT_EQ(r.witness.length(), r.length);
}

TEST(Shortest, BudgetExhausted)
{
    try {
        shortest_untangle(make_star(6), 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BudgetExhausted);
    }
}

TEST(Longest, Examples)
{
    EXPECT_EQ(longest_untangle(make_fence(2).first).length, 4u);
    EXPECT_EQ(longest_untangle(make_star(3)).length, 3u);
    EXPECT_EQ(longest_untangle(x_shape_on_line()).length, 1u);
}

TEST(Longest, MemoAgreesWithNaiveDfs)
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const SampleKind k = seed % 3 == 0 ? SampleKind::General
                             : seed % 3 == 1 ? SampleKind::Convex
                                             : SampleKind::RedOnLine;
        const Matching M = sample_random(k, 2 + seed % 3, seed);
        EXPECT_EQ(longest_untangle(M).length, naive_longest(M));
        EXPECT_EQ(shortest_untangle(M).length, naive_shortest(M));
    }
}

TEST(Search, ShortestGreedyLongestSandwich)
{
    for (std::uint64_t seed = 0; seed < 80; ++seed) {
        const Matching M = sample_random(SampleKind::RedOnLine, 2 + seed % 4, seed);
        const std::size_t s = shortest_untangle(M).length;
        const std::size_t g = run_greedy_top(M).length();
        const std::size_t l = longest_untangle(M).length;
        EXPECT_LE(s, g);
        EXPECT_LE(g, l);
    }
}

TEST(Search, ConvexLongestAtMostChoose2)
{
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const std::size_t n = 2 + seed % 4;
        const Matching M = sample_random(SampleKind::Convex, n, seed);
        EXPECT_LE(longest_untangle(M).length, choose2(n));
    }
}

TEST(Search, NoConfigurationRepeatsAlongAPath)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matching M = sample_random(SampleKind::General, 5, seed);
        std::size_t paths = 0;
        for_each_sequence(M, [&](const std::vector<Flip>& seq, const Matching&) {
            std::set<std::string> seen;
            Matching cur = M;
            seen.insert(cur.key());
            for (const Flip& f : seq) {
                cur = apply_flip(cur, f);
                EXPECT_TRUE(seen.insert(cur.key()).second);
            }
            return ++paths < 2000;
        });
    }
}

TEST(Enumerate, Examples)
{
    const Matching free_m({R(0, 0), R(1, 0)}, {B(0, 1), B(1, 1)}, {0, 1});
    const Enumeration e0 = enumerate_sequences(free_m, 10);
    ASSERT_EQ(e0.sequences.size(), 1u);
    EXPECT_TRUE(e0.sequences[0].empty());
    EXPECT_FALSE(e0.truncated);

    const Enumeration es = enumerate_sequences(make_star(4), 3);
    EXPECT_TRUE(es.truncated);
    EXPECT_EQ(es.sequences.size(), 3u);
}

TEST(Enumerate, SummaryAgreesWithListing)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Matching M = sample_random(SampleKind::General, 4, seed);
        const Enumeration e = enumerate_sequences(M, 1'000'000);
        const SequenceSummary s = summarize_sequences(M);
        ASSERT_FALSE(e.truncated);
        EXPECT_EQ(s.count, static_cast<unsigned long>(e.sequences.size()));
        std::map<std::size_t, std::size_t> lens;
        std::set<std::string> ends;
        for (const auto& seq : e.sequences) {
            lens[seq.size()]++;
            Matching cur = M;
            for (const Flip& f : seq)
                cur = apply_flip(cur, f);
            EXPECT_TRUE(is_crossing_free(cur));
            ends.insert(cur.key());
        }
        for (const auto& [l, c] : lens)
            EXPECT_EQ(s.lengths.at(l), static_cast<unsigned long>(c));
        EXPECT_EQ(s.ends, ends);
    }
}

TEST(Enumerate, ConvexEndsAreCrossingFree)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Matching M = sample_random(SampleKind::Convex, 4, seed);
        for_each_sequence(M, [&](const std::vector<Flip>&, const Matching& end) {
            EXPECT_TRUE(is_crossing_free(end));
            return true;
        });
    }
}

TEST(Verify, Examples)
{
    const Matching bf = make_butterfly(3, true);
    const FlipSequence s = scripted_butterfly_sequence(bf, 3);
    const VerificationReport ok = verify_sequence(bf, s.steps);
    EXPECT_TRUE(ok.valid);
    EXPECT_TRUE(ok.complete);
    EXPECT_EQ(s.length(), 21u);
    EXPECT_EQ(ok.crossing_deltas.size(), 21u);

    const Matching free_m({R(0, 0), R(1, 0)}, {B(0, 1), B(1, 1)}, {0, 1});
    const VerificationReport bad = verify_sequence(free_m, {Flip{0, 1}});
    EXPECT_FALSE(bad.valid);
    ASSERT_TRUE(bad.first_invalid.has_value());
    EXPECT_EQ(*bad.first_invalid, 0u);

    const VerificationReport empty = verify_sequence(free_m, {});
    EXPECT_TRUE(empty.valid);
    EXPECT_TRUE(empty.complete);
    EXPECT_EQ(empty.final_crossings, 0u);
}

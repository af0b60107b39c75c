#include <gtest/gtest.h>

#include <random>

#include "untangle/generators.hpp"

using namespace untangle;

namespace {

std::size_t choose2(std::size_t n) { return n * (n - 1) / 2; }

std::size_t brute_crossings(const Matching& M)
{
    std::size_t c = 0;
    for (std::size_t i = 0; i < M.n(); ++i)
        for (std::size_t j = i + 1; j < M.n(); ++j)
            c += segments_cross(M.segment(i), M.segment(j));
    return c;
}

} // namespace

TEST(Star, AllPairsCrossAndScriptedIsChoose2)
{
    for (std::size_t n = 1; n <= 8; ++n) {
        const Matching s = make_star(n);
        EXPECT_EQ(brute_crossings(s), choose2(n));
        EXPECT_TRUE(s.general_position(true).valid);
        const FlipSequence seq = scripted_star_sequence(s);
        EXPECT_EQ(seq.length(), choose2(n));
        EXPECT_TRUE(verify_sequence(s, seq.steps).complete);
    }
}

TEST(Star, LongestEqualsChoose2)
{
    for (std::size_t n = 2; n <= 5; ++n)
        EXPECT_EQ(longest_untangle(make_star(n)).length, choose2(n));
}

TEST(Star, BluesCollinearRedsOnLine)
{
    const Matching s = make_star(5);
    const auto& b = s.points().blues();
    for (std::size_t j = 2; j < b.size(); ++j)
        EXPECT_EQ(orient_sign(b[0], b[1], b[j]), 0);
    EXPECT_TRUE(is_red_on_line(s));
}

TEST(Butterfly, Counts)
{
    for (std::size_t m = 1; m <= 5; ++m) {
        const Matching bf = make_butterfly(m, false);
        EXPECT_EQ(brute_crossings(bf), choose2(2 * m));
        // inter-star pairs: every left segment crosses every right segment
        std::size_t inter = 0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = m; j < 2 * m; ++j)
                inter += bf.crosses(i, j);
        EXPECT_EQ(inter, m * m);
    }
}

TEST(Butterfly, PerturbationKeepsStates)
{
    for (std::size_t m = 1; m <= 6; ++m) {
        const Matching plain = make_butterfly(m, false);
        const Matching pert = make_butterfly(m, true);
        EXPECT_EQ(pair_state_matrix(plain), pair_state_matrix(pert));
        EXPECT_TRUE(pert.general_position(true).valid);
        EXPECT_NO_THROW(require_distinct_blue_heights(pert));
        EXPECT_EQ(top_segment(pert), 0u);
    }
    EXPECT_THROW(make_butterfly(0, true), Error);
}

TEST(Butterfly, ScriptedLength)
{
    for (std::size_t m = 1; m <= 6; ++m) {
        const Matching bf = make_butterfly(m, true);
        const FlipSequence s = scripted_butterfly_sequence(bf, m);
        // (3/2)C(2m,2) - m/2 = 3m^2 - 2m
        EXPECT_EQ(s.length(), 3 * m * m - 2 * m);
        EXPECT_TRUE(verify_sequence(bf, s.steps).complete);
    }
    EXPECT_EQ(scripted_butterfly_sequence(make_butterfly(3, true), 3).length(), 21u);
}

TEST(Fence, Examples)
{
    for (std::size_t m = 2; m <= 6; ++m) {
        const auto [F, d] = make_fence(m);
        EXPECT_EQ(F.n(), 2 * m);
        EXPECT_EQ(brute_crossings(F), 3 * m - 2);
        EXPECT_TRUE(is_derived_fence(F, d));
        EXPECT_TRUE(in_convex_position(F.points().all_points()));
        for (const auto& [i, j] : crossing_pairs(F))
            EXPECT_NO_THROW(classify_crossing(F, d, i, j));
    }
    EXPECT_THROW(make_fence(1), Error);
}

TEST(Fence, WrongPointSet)
{
    const auto [F, d] = make_fence(3);
    try {
        is_derived_fence(make_star(6), d);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::WrongPointSet);
    }
}

TEST(Fence, RandomWalksDropOneCrossingPerFlip)
{
    std::mt19937_64 rng(17);
    for (std::size_t m = 2; m <= 6; ++m) {
        const auto [F, d] = make_fence(m);
        for (int walk = 0; walk < 20; ++walk) {
            Matching cur = F;
            std::size_t steps = 0;
            for (auto pairs = crossing_pairs(cur); !pairs.empty(); pairs = crossing_pairs(cur)) {
                const auto [i, j] = pairs[rng() % pairs.size()];
                EXPECT_NO_THROW(classify_crossing(cur, d, i, j));
                const Matching nxt = apply_flip(cur, Flip{static_cast<int>(i), static_cast<int>(j)});
                EXPECT_EQ(crossing_count(nxt) + 1, crossing_count(cur));
                EXPECT_TRUE(is_derived_fence(nxt, d));
                cur = nxt;
                ++steps;
            }
            EXPECT_EQ(steps, 3 * m - 2);
        }
    }
}

TEST(Sampler, PropertiesAndDeterminism)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Matching a = sample_random(SampleKind::RedOnLine, 6, seed);
        EXPECT_TRUE(is_red_on_line(a));
        EXPECT_NO_THROW(require_distinct_blue_heights(a));
        EXPECT_TRUE(a.general_position(true).valid);
        EXPECT_EQ(a, sample_random(SampleKind::RedOnLine, 6, seed));
        const Matching c = sample_random(SampleKind::Convex, 6, seed);
        EXPECT_TRUE(in_convex_position(c.points().all_points()));
        const Matching g = sample_random(SampleKind::General, 6, seed);
        EXPECT_TRUE(g.general_position().valid);
        EXPECT_EQ(g.key(), sample_random(SampleKind::General, 6, seed).key());
    }
    EXPECT_THROW(sample_random(SampleKind::General, 0, 1), Error);
}

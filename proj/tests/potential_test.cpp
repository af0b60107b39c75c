#include <gtest/gtest.h>

#include "untangle/engine.hpp"
#include "untangle/generators.hpp"
#include "untangle/potential.hpp"

using namespace untangle;

namespace {

Point R(long x, long y) { return red(Coord(x), Coord(y)); }
Point B(long x, long y) { return blue(Coord(x), Coord(y)); }

// Direct oracle: intersect both segments' supporting lines through r_k with y = L.
bool observed_oracle(const Matching& M, std::size_t k, std::size_t i, std::size_t j, const Coord& L)
{
    const Coord xk = M.red(k).x;
    auto img = [&](std::size_t s) -> Coord {
        const Point& b = M.blue_of(s);
        // point of line (r_k, b) at height L
        return xk + (b.x - xk) * (L / b.y);
    };
    return (M.red(i).x < M.red(j).x) != (img(i) < img(j));
}

} // namespace

TEST(Project, Examples)
{
    const Matching M({R(0, 0), R(4, 0)}, {B(2, 2), B(1, 1)}, {0, 1});
    const auto pc = project_tk(M, 0, Coord(4));
    EXPECT_EQ(pc.images[0], Coord(4)); // (2,2) scaled by 2
    EXPECT_EQ(pc.images[1], Coord(4)); // (1,1) scaled by 4
    EXPECT_THROW(project_tk(M, 0, Coord(2)), Error);
    try {
        project_tk(Matching({R(0, 1)}, {B(1, 2)}, {0}), 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotRedOnLine);
    }
    try {
        k_observed_crossing(M, 0, 0, 1, Coord(4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ProjectedTie);
    }
}

TEST(KObserved, NotAKPair)
{
    const Matching M({R(0, 0), R(1, 0), R(2, 0)}, {B(0, 1), B(1, 3), B(2, 2)}, {0, 1, 2});
    try {
        k_observed_crossing(M, 2, 0, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotAKPair);
    }
    EXPECT_THROW(k_observed_crossing(M, 1, 1, 1), Error);
    EXPECT_NO_THROW(k_observed_crossing(M, 1, 0, 2));
}

TEST(KObserved, NonCrossingPairCanBeObserved)
{
    // (0,0)-(0,10) and (10,0)-(1,1) do not cross, but seen from r_k = (10,0) they do
    const Matching M({R(0, 0), R(10, 0)}, {B(0, 10), B(1, 1)}, {0, 1});
    ASSERT_FALSE(M.crosses(0, 1));
    EXPECT_TRUE(k_observed_crossing(M, 1, 0, 1));
    EXPECT_TRUE(observed_oracle(M, 1, 0, 1, default_line_y(M)));
}

TEST(KObserved, CrossingImpliesObserved)
{
    // Lemma-level property: every crossing k-pair is k-observed crossing.
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; checked < 10000; ++seed) {
        const Matching M = sample_random(SampleKind::RedOnLine, 3 + seed % 6, seed);
        const auto rank = red_ranks(M);
        const Coord L = default_line_y(M);
        for (std::size_t i = 0; i < M.n(); ++i)
            for (std::size_t j = i + 1; j < M.n(); ++j) {
                if (!M.crosses(i, j))
                    continue;
                for (std::size_t k = 0; k < M.n(); ++k) {
                    const auto lo = std::min(rank[i], rank[j]), hi = std::max(rank[i], rank[j]);
                    if (rank[k] < lo || rank[k] > hi)
                        continue;
                    bool obs = false;
                    try {
                        obs = k_observed_crossing(M, k, i, j);
                    } catch (const Error&) {
                        continue; // projected tie
                    }
                    EXPECT_TRUE(obs);
                    EXPECT_EQ(obs, observed_oracle(M, k, i, j, L));
                    ++checked;
                }
            }
    }
}

TEST(InversionWord, Examples)
{
    EXPECT_EQ(count_inversions("LCR"), 0u);
    EXPECT_EQ(count_inversions("RL"), 1u);
    EXPECT_EQ(count_inversions("RCL"), 3u);
    EXPECT_EQ(count_inversions("RLLRCR"), 4u);
    EXPECT_EQ(count_inversions(""), 0u);
}

TEST(Phi, MatchesInversionWordOnSamples)
{
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const Matching M = sample_random(SampleKind::RedOnLine, 2 + seed % 8, seed);
        for (std::size_t k = 0; k < M.n(); ++k) {
            std::size_t phi, inv;
            try {
                phi = phi_k(M, k);
                inv = count_inversions(inversion_word(M, k));
            } catch (const Error&) {
                continue;
            }
            EXPECT_EQ(phi, inv);
            EXPECT_LE(phi, phi_k_bound(M.n(), red_ranks(M)[k] + 1));
        }
    }
}

TEST(Phi, Bounds)
{
    EXPECT_EQ(phi_total_bound(2), 2u);
    EXPECT_EQ(phi_total_bound(6), 50u);
    EXPECT_EQ(phi_k_bound(6, 3), 11u);
    const Matching bf = make_butterfly(3, true);
    EXPECT_LE(phi_total(bf), phi_total_bound(6));
    for (std::size_t n = 2; n <= 8; ++n) {
        const Matching star = make_star(n);
        EXPECT_LE(phi_total(star), phi_total_bound(n));
        std::size_t sum = 0;
        for (std::size_t k1 = 1; k1 <= n; ++k1)
            sum += phi_k_bound(n, k1);
        EXPECT_EQ(sum, phi_total_bound(n));
    }
}

TEST(Phi, LineHeightInvariance)
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Matching M = sample_random(SampleKind::RedOnLine, 5, seed);
        const Coord L = default_line_y(M);
        for (std::size_t k = 0; k < M.n(); ++k) {
            try {
                EXPECT_EQ(phi_k(M, k, L), phi_k(M, k, L * 1000));
                EXPECT_EQ(inversion_word(M, k, L), inversion_word(M, k, L + make_coord(1, 3)));
            } catch (const Error&) {
            }
        }
    }
}

TEST(Phi, DecreasesAlongSequences)
{
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        const Matching M = sample_random(SampleKind::RedOnLine, 3 + seed % 6, seed);
        const FlipSequence seq = run_policy(M, Policy::random(seed));
        Matching cur = M;
        for (const Flip& f : seq.steps) {
            const Matching nxt = apply_flip(cur, f);
            std::size_t before = 0, after = 0;
            bool tie = false;
            for (std::size_t k = 0; k < M.n() && !tie; ++k) {
                try {
                    const std::size_t a = phi_k(cur, k), b = phi_k(nxt, k);
                    EXPECT_LE(b, a);
                    if (is_k_flip(cur, f, k)) {
                        EXPECT_GE(a, b + 1);
                    }
                    before += a;
                    after += b;
                } catch (const Error&) {
                    tie = true;
                }
            }
            if (!tie) {
                EXPECT_GE(before, after + 2);
            }
            cur = nxt;
        }
    }
}

#include <gtest/gtest.h>

#include "untangle/io.hpp"
#include "untangle/report.hpp"
#include "untangle/svg.hpp"

using namespace untangle;

namespace {

std::size_t count_of(const std::string& s, const std::string& needle)
{
    std::size_t c = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1))
        ++c;
    return c;
}

} // namespace

TEST(Json, MatchingRoundTripIsExact)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Matching M = sample_random(static_cast<SampleKind>(seed % 3), 2 + seed % 6, seed);
        const std::string text = to_json(M).dump();
        const Matching back = matching_from_json(parse_json(text));
        EXPECT_EQ(back, M);
        EXPECT_EQ(to_json(back).dump(), text);
    }
    const Matching bf = make_butterfly(3, true); // denominators up to 2^20
    EXPECT_EQ(matching_from_json(to_json(bf)), bf);
    EXPECT_EQ(to_json(bf)["blues"][0][1].get<std::string>(), to_string(bf.blue(0).y));
}

TEST(Json, SequenceRoundTrip)
{
    const Matching bf = make_butterfly(3, true);
    const FlipSequence s = scripted_butterfly_sequence(bf, 3);
    const FlipSequence back = sequence_from_json(parse_json(to_json(s).dump()));
    EXPECT_EQ(back.steps, s.steps);
    EXPECT_EQ(back.end, s.end);
}

TEST(Json, Errors)
{
    EXPECT_THROW(parse_json("{"), Error);
    EXPECT_THROW(matching_from_json(parse_json(R"({"reds":[["1/0","0"]],"blues":[["1","1"]],"mate":[0]})")),
                 Error);
    EXPECT_THROW(matching_from_json(parse_json(R"({"reds":[[1,0]],"blues":[["1","1"]],"mate":[0]})")), Error);
    EXPECT_THROW(matching_from_json(parse_json(R"({"reds":[]})")), Error);
    try {
        sequence_from_json(parse_json(
            R"({"start":{"reds":[["0","0"],["2","0"]],"blues":[["0","1"],["2","1"]],"mate":[0,1]},"steps":[[0,1]]})"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotCrossing);
    }
}

TEST(Svg, Markers)
{
    const Matching one({red(0, 0)}, {blue(1, 1)}, {0});
    const std::string s = render_svg(one);
    EXPECT_EQ(count_of(s, "<line"), 1u);
    EXPECT_EQ(count_of(s, "<rect class=\"red\""), 1u);
    EXPECT_EQ(count_of(s, "<circle class=\"blue\""), 1u);
    EXPECT_EQ(count_of(s, "fill=\"white\""), 1u);
    EXPECT_EQ(s, render_svg(one));
}

TEST(Svg, OneFramePerState)
{
    const Matching bf = make_butterfly(3, true);
    const auto frames = render_svg(scripted_butterfly_sequence(bf, 3));
    EXPECT_EQ(frames.size(), 22u);
    EXPECT_EQ(frames.front(), render_svg(bf));
}

TEST(Report, Examples)
{
    const BoundReport star = bound_report("star-6", make_star(6), true, kDefaultBudget);
    EXPECT_EQ(star.longest, std::optional<std::size_t>(15));
    EXPECT_EQ(star.thm7, Check::Pass);
    const BoundReport fence = bound_report("fence-2", make_fence(2).first, true, kDefaultBudget);
    EXPECT_EQ(fence.shortest, std::optional<std::size_t>(4));
    EXPECT_EQ(fence.longest, std::optional<std::size_t>(4));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const BoundReport r = bound_report("r", sample_random(SampleKind::RedOnLine, 6, seed), false,
                                           kDefaultBudget);
        ASSERT_TRUE(r.longest.has_value());
        EXPECT_LE(*r.longest, 25u);
        EXPECT_EQ(r.thm3, Check::Pass);
        EXPECT_EQ(r.thm4, Check::Pass);
    }
    const BoundReport capped = bound_report("star-6", make_star(6), true, 5);
    EXPECT_FALSE(capped.longest.has_value());
    EXPECT_EQ(capped.thm7, Check::NotApplicable);
}

TEST(Report, Table)
{
    const auto rows = table1_report(5, 2, 1);
    for (const auto& r : rows)
        EXPECT_TRUE(r.ok()) << r.id;
    const std::string t = format_table(rows);
    EXPECT_NE(t.find("PASS"), std::string::npos);
    EXPECT_EQ(t, format_table(table1_report(5, 2, 1)));
}

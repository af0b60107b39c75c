#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "untangle/reduction.hpp"

using namespace untangle;

namespace {

const char* kFig2 = "x1 x2 x3 x4 x5 x6\n"
                    "+ x1 x2 x3 @1\n"
                    "+ x1 x3 x6 @2\n"
                    "- x2 x3 x4 @1\n"
                    "- x4 x5 x6 @1\n";

const char* kOne = "a b c\n+ a b c @1\n";

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error";
    return ErrorCode::InvalidArgument;
}

bool has_violation(const ValidationReport& r, const std::string& tag)
{
    for (const auto& v : r.violations)
        if (v.rfind(tag, 0) == 0)
            return true;
    return false;
}

} // namespace

TEST(Formula, ParseAndFormat)
{
    const RpmFormula f = parse_formula(std::string("# comment\n") + kFig2);
    EXPECT_EQ(f.v(), 6u);
    ASSERT_EQ(f.c(), 4u);
    EXPECT_EQ(f.clauses[1].level, 2);
    EXPECT_EQ(f.clauses[2].polarity, Polarity::Negative);
    EXPECT_EQ((f.clauses[3].vars), (std::array<int, 3>{3, 4, 5}));
    EXPECT_EQ(format_formula(f), kFig2);
    EXPECT_EQ(format_formula(parse_formula(format_formula(f))), kFig2);
}

TEST(Formula, ParseErrors)
{
    for (const char* bad : {"", "a b a\n", "a b c\n+ a b d @1\n", "a b c\n+ b a c @1\n",
                            "a b c\n+ a b c\n", "a b c\n* a b c @1\n", "a b c\n+ a b c @0\n",
                            "a b c\n+ a b c @x\n"})
        EXPECT_EQ(code_of([&] { parse_formula(bad); }), ErrorCode::ParseError) << bad;
}

TEST(Formula, Evaluate)
{
    const RpmFormula f = parse_formula(kFig2);
    EXPECT_TRUE(evaluate(f, {true, false, false, true, false, false}));
    EXPECT_FALSE(evaluate(f, {false, false, false, false, false, false}));
    EXPECT_TRUE(brute_force_satisfiable(f));
    const RpmFormula u = parse_formula("a b c\n+ a b c @1\n- a b c @1\n");
    EXPECT_TRUE(brute_force_satisfiable(u));
}

TEST(Embedding, Fig2LayoutIsValid)
{
    const RpmFormula f = parse_formula(kFig2);
    const Embedding e = derive_embedding(f, 3);
    const ValidationReport r = validate_embedding(f, e);
    EXPECT_EQ(e.variables.size(), 6u);
    EXPECT_TRUE(r.valid) << (r.violations.empty() ? "" : r.violations.front());
    for (std::size_t j = 0; j < f.c(); ++j) {
        const bool pos = f.clauses[j].polarity == Polarity::Positive;
        EXPECT_EQ(e.clauses[j].y0 > 0, pos);
    }
}

TEST(Embedding, Violations)
{
    const RpmFormula f = parse_formula(kFig2);
    const Embedding good = derive_embedding(f, 3);

    Embedding overlap = good;
    overlap.clauses[0].y0 = 0; // reaches into the variable rectangles
    EXPECT_TRUE(has_violation(validate_embedding(f, overlap), "(i)"));

    Embedding above = good;
    const Coord h = above.clauses[2].y1 - above.clauses[2].y0;
    above.clauses[2].y0 = 100;
    above.clauses[2].y1 = 100 + h;
    EXPECT_TRUE(has_violation(validate_embedding(f, above), "(iii)"));

    Embedding off = good;
    off.variables[1].y0 -= 1; // centroid below the axis
    EXPECT_TRUE(has_violation(validate_embedding(f, off), "(ii)"));

    // clause 0 is nested inside clause 1; widening it puts clause 1's left edge through it
    Embedding cut = good;
    cut.clauses[0].x0 = cut.edges[1][0] - 1;
    EXPECT_TRUE(has_violation(validate_embedding(f, cut), "(iv)"));
}

TEST(Gadgets, VariableOrPadding)
{
    const VariableGadget v = build_variable_gadget(Rect{0, -1, 2, 1});
    const GadgetReport vr = variable_report(v);
    EXPECT_TRUE(vr.verdict);
    EXPECT_EQ(vr.count, 2u);
    EXPECT_EQ(code_of([] { build_variable_gadget(Rect{0, 0, 0, 1}); }), ErrorCode::DegenerateRectangle);

    const OrGadget g = build_or_gadget(clause_frame(0, 10, 20, 0, 1));
    for (bool l : {false, true})
        for (bool r : {false, true})
            EXPECT_TRUE(or_report(g, l, r).verdict) << l << r;
    OrGadget broken = g;
    broken.b1p = broken.b1;
    broken.b1p.x += 1;
    EXPECT_FALSE(audit_or_gadget(broken).empty());

    const ClauseTemplate t;
    for (std::size_t k : {0u, 1u, 3u, 9u}) {
        const PaddingGadget p = build_padding(k, t.r4, t.b7);
        const GadgetReport r = padding_report(p);
        EXPECT_TRUE(r.verdict) << k;
        EXPECT_EQ(r.count, 1u);
        if (k > 0) {
            EXPECT_TRUE(is_crossing_free(p.untriggered()));
        }
    }
}

TEST(Gadgets, ClauseTable)
{
    const ClauseGadget c = build_clause_gadget(0, 7, 20, 0, 1, 0);
    for (int m = 0; m < 8; ++m) {
        const bool x = m & 4, y = m & 2, z = m & 1;
        const GadgetReport r = clause_report(c.matching(x, y, z), x, y, z, false);
        EXPECT_TRUE(r.verdict) << r.id << " " << r.note;
    }
    // the right input alone costs one more flip than the one-true claim
    EXPECT_EQ(composed_clause_length(false, false, true), 3u);
    EXPECT_EQ(claimed_clause_length(false, false, true), 2u);
    EXPECT_TRUE(clause_report(c.matching(false, true, false), false, true, false, true).verdict);
    EXPECT_FALSE(clause_report(c.matching(false, false, true), false, false, true, true).verdict);
}

TEST(Gadgets, PaddedFalseClause)
{
    const std::size_t k = 9;
    const ClauseGadget c = build_clause_gadget(0, 10, 20, 0, 1, k);
    const GadgetReport r = enumerate_report("padded", c.matching(false, false, false, true));
    ASSERT_FALSE(r.lengths.empty());
    EXPECT_GE(r.lengths.begin()->first, 4 + k);
    EXPECT_TRUE(r.all_lengths(4 + k));
}

TEST(Branching, Lengths)
{
    for (auto [a, b] : std::vector<std::pair<std::size_t, std::size_t>>{{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}, {2, 2}}) {
        const GadgetReport r = verify_branching(a, b);
        EXPECT_TRUE(r.verdict) << r.id;
        EXPECT_TRUE(r.all_lengths(2 * (a + b))) << r.id;
        EXPECT_EQ(r.ends.size(), 1u) << r.id;
    }
    EXPECT_EQ(code_of([] { branching_formula(0, 0); }), ErrorCode::InvalidArgument);
}

TEST(Reduction, PaddingSize)
{
    const RpmFormula f = parse_formula(kOne);
    EXPECT_EQ(padding_size(f, 1), 9u);
    EXPECT_EQ(padding_size(f, make_coord(3, 2)), 13u);
    EXPECT_EQ(padding_size(f, make_coord(9, 8)), 10u);
    EXPECT_EQ(code_of([&] { padding_size(f, make_coord(1, 2)); }), ErrorCode::InvalidArgument);
}

TEST(Reduction, SingleClause)
{
    const RpmFormula f = parse_formula(kOne);
    const MPhi m = reduce(f, 1);
    EXPECT_TRUE(m.audits_ok());
    EXPECT_EQ(m.k, 9u);
    EXPECT_EQ(2 * m.matching.n(), m.expected_points());
    EXPECT_EQ(m.matching.n(), 3 * 3 + 5 + 9u);
    EXPECT_EQ(crossing_count(m.matching), 6u);
    const Decision d = decide_via_untangling(m, 1);
    EXPECT_EQ(d.verdict, Verdict::Satisfiable);
    EXPECT_LE(d.length, 8u);
    EXPECT_EQ(d.threshold, 8);
}

TEST(Reduction, NoClauses)
{
    const RpmFormula f = parse_formula("a b c d\n");
    const MPhi m = reduce(f, 1);
    EXPECT_EQ(m.matching.n(), 12u);
    const Decision d = decide_via_untangling(m, 1);
    EXPECT_EQ(d.verdict, Verdict::Satisfiable);
    EXPECT_EQ(d.length, 4u);
}

TEST(Reduction, Fig2Formula)
{
    const RpmFormula f = parse_formula(kFig2);
    AssemblyOptions opt;
    const MPhi m = reduce(f, 1, opt, true);
    for (const auto& a : m.audits)
        EXPECT_TRUE(a.ok) << a.step << ": " << a.constraint;
    EXPECT_EQ(m.k, 27u);
    EXPECT_EQ(m.variable_segments.size(), 6u);
    EXPECT_EQ(m.clause_segments.size(), 4u);
    for (const auto& c : m.clause_segments)
        EXPECT_EQ(c.padding.size(), 27u);
    EXPECT_EQ(2 * m.matching.n(), 6 * 6 + 4 * (10 + 2 * 27u));
}

TEST(Reduction, RejectsInvalidEmbedding)
{
    const RpmFormula f = parse_formula(kFig2);
    Embedding e = derive_embedding(f, 3);
    e.clauses[2].y0 = 1;
    e.clauses[2].y1 = 2;
    EXPECT_EQ(code_of([&] { assemble_m_phi(f, e, 1); }), ErrorCode::AssemblyAuditFailed);
}

TEST(Reduction, BitSizeGrowsSlowly)
{
    std::vector<std::size_t> bits;
    for (int m : {1, 2, 4, 8}) {
        std::string s;
        for (int i = 0; i < 3 * m; ++i)
            s += "v" + std::to_string(i) + " ";
        s += "\n";
        for (int j = 0; j < m; ++j)
            s += "+ v" + std::to_string(3 * j) + " v" + std::to_string(3 * j + 1) + " v" +
                 std::to_string(3 * j + 2) + " @1\n";
        const RpmFormula f = parse_formula(s);
        AssemblyOptions opt;
        opt.build_only = true;
        const MPhi M = assemble_m_phi_k(f, derive_embedding_gp(f, 1), 1, opt, true);
        std::size_t b = 0;
        for (const auto& p : M.matching.points().all_points())
            b = std::max({b, bit_size(p.x), bit_size(p.y)});
        bits.push_back(b);
    }
    // eight times the instance, at most twice the bits
    EXPECT_LE(bits.back(), 2 * bits.front());
}

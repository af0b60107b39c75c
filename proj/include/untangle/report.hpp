#ifndef UNTANGLE_REPORT_HPP
#define UNTANGLE_REPORT_HPP

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "potential.hpp"

namespace untangle {

enum class Check { Pass, Fail, NotApplicable };

inline const char* to_string(Check c)
{
    return c == Check::Pass ? "pass" : c == Check::Fail ? "FAIL" : "n/a";
}

struct BoundReport {
    std::string id;
    std::size_t n = 0;
    std::size_t crossings = 0;
    std::size_t nonH = 0;
    std::optional<std::size_t> phi;    // red-on-a-line only
    std::optional<std::size_t> greedy; // red-on-a-line with distinct blue heights
    std::optional<std::size_t> shortest;
    std::optional<std::size_t> longest;
    Check thm3 = Check::NotApplicable; // greedy <= nonH <= C(n,2)
    Check thm4 = Check::NotApplicable; // Phi <= C(n,2)(n+4)/3 and longest <= Phi/2
    Check thm7 = Check::NotApplicable; // convex or star: longest <= C(n,2)

    bool ok() const { return thm3 != Check::Fail && thm4 != Check::Fail && thm7 != Check::Fail; }
};

inline BoundReport bound_report(const std::string& id, const Matching& M, bool convex_like,
                                std::size_t budget)
{
    BoundReport r;
    r.id = id;
    r.n = M.n();
    r.crossings = crossing_count(M);
    r.nonH = nonH_count(M);
    const std::size_t c2 = M.n() * (M.n() - 1) / 2;
    try {
        r.shortest = shortest_untangle(M, budget).length;
        r.longest = longest_untangle(M, budget).length;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::BudgetExhausted)
            throw;
    }
    if (is_red_on_line(M)) {
        r.phi = phi_total(M);
        bool ok4 = *r.phi <= phi_total_bound(M.n());
        if (r.longest)
            ok4 = ok4 && 2 * *r.longest <= *r.phi;
        r.thm4 = ok4 ? Check::Pass : Check::Fail;
        try {
            const FlipSequence g = run_greedy_top(M);
            r.greedy = g.length();
            r.thm3 = g.complete() && g.length() <= r.nonH && r.nonH <= c2 ? Check::Pass : Check::Fail;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::TiedBlueHeights)
                throw;
        }
    }
    if (convex_like && r.longest)
        r.thm7 = *r.longest <= c2 ? Check::Pass : Check::Fail;
    return r;
}

// Stars, butterflies, fences and random instances up to max_n segments.
inline std::vector<BoundReport> table1_report(std::size_t max_n, std::size_t trials, std::uint64_t seed,
                                              std::size_t budget = kDefaultBudget)
{
    std::vector<BoundReport> out;
    for (std::size_t n = 2; n <= max_n; ++n) {
        out.push_back(bound_report("star-" + std::to_string(n), make_star(n), true, budget));
        if (n % 2 == 0) {
            out.push_back(bound_report("butterfly-" + std::to_string(n / 2), make_butterfly(n / 2, true),
                                       false, budget));
            if (n >= 4)
                out.push_back(bound_report("fence-" + std::to_string(n / 2), make_fence(n / 2).first,
                                           true, budget));
        }
        for (std::size_t t = 0; t < trials; ++t) {
            const std::uint64_t s = seed + 1000 * n + t;
            out.push_back(bound_report("line-" + std::to_string(n) + "-" + std::to_string(s),
                                       sample_random(SampleKind::RedOnLine, n, s), false, budget));
            out.push_back(bound_report("convex-" + std::to_string(n) + "-" + std::to_string(s),
                                       sample_random(SampleKind::Convex, n, s), true, budget));
        }
    }
    return out;
}

inline std::string format_table(const std::vector<BoundReport>& rows)
{
    auto opt = [](const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "-"; };
    std::ostringstream os;
    os << "id\tn\tX\tnonH\tphi\tgreedy\tshortest\tlongest\tthm3\tthm4\tthm7\n";
    std::size_t bad = 0;
    for (const auto& r : rows) {
        os << r.id << '\t' << r.n << '\t' << r.crossings << '\t' << r.nonH << '\t' << opt(r.phi) << '\t'
           << opt(r.greedy) << '\t' << opt(r.shortest) << '\t' << opt(r.longest) << '\t'
           << to_string(r.thm3) << '\t' << to_string(r.thm4) << '\t' << to_string(r.thm7) << '\n';
        bad += !r.ok();
    }
    os << (bad ? "FAIL " : "PASS ") << rows.size() - bad << "/" << rows.size() << " instances within bounds\n";
    return os.str();
}

} // namespace untangle

#endif

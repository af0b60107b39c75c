#include "untangle/cli.hpp"

#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "untangle/io.hpp"
#include "untangle/reduction.hpp"
#include "untangle/report.hpp"
#include "untangle/svg.hpp"
#include "untangle/tracking.hpp"

namespace untangle {

namespace {

struct Globals {
    std::string in, out;
    std::uint64_t seed = 0;
    std::uint64_t budget = kDefaultBudget;
};

// Raised for a failed audit or bound; maps to exit code 2.
struct CheckFailed {
    std::string what;
};

void emit(const Globals& g, const std::string& text)
{
    if (g.out.empty())
        std::cout << text;
    else
        write_file(g.out, text);
}

void emit(const Globals& g, const Json& j) { emit(g, j.dump(2) + "\n"); }

Matching load_matching(const std::string& path)
{
    if (path.empty())
        throw Error(ErrorCode::InvalidArgument, "--in is required");
    return matching_from_json(parse_json(read_file(path)));
}

// Start comes from --in when given, else from the sequence file.
FlipSequence load_sequence(const Globals& g, const std::string& seq_path)
{
    const Json j = parse_json(read_file(seq_path));
    if (!g.in.empty()) {
        FlipSequence s(load_matching(g.in));
        for (const Flip& f : steps_from_json(j.at("steps")))
            s.push(f);
        return s;
    }
    return sequence_from_json(j);
}

Policy policy_of(const std::string& name, std::uint64_t seed)
{
    if (name == "first")
        return Policy::first_found();
    if (name == "top")
        return Policy::top_most();
    if (name == "random")
        return Policy::random(seed);
    throw Error(ErrorCode::InvalidArgument, "unknown policy " + name);
}

Json search_json(const SearchResult& r)
{
    Json j = to_json(r.witness);
    j["length"] = r.length;
    j["explored"] = r.explored;
    return j;
}

Json rect_json(const Rect& r)
{
    return Json::array({to_string(r.x0), to_string(r.y0), to_string(r.x1), to_string(r.y1)});
}

Json gadget_json(const GadgetReport& r)
{
    Json lengths = Json::object();
    for (const auto& [l, c] : r.lengths)
        lengths[std::to_string(l)] = c;
    return Json{{"id", r.id},   {"sequences", r.count}, {"lengths", lengths}, {"ends", r.ends.size()},
                {"ok", r.verdict}, {"note", r.note}};
}

} // namespace

int run_cli(int argc, char** argv)
{
    CLI::App app{"untangle: flip sequences on red-blue matchings"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--in", g.in, "input matching (JSON)");
    app.add_option("--out", g.out, "output file (stdout when omitted)");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--budget", g.budget, "search budget in configurations");

    std::function<void()> action;

    // gen
    auto* gen = app.add_subcommand("gen", "generate an instance");
    std::string family, kind = "line";
    std::size_t n = 0, m = 0;
    bool perturb = false;
    gen->add_option("family", family, "star|butterfly|fence|random")->required();
    gen->add_option("--n", n, "segments (star, random)");
    gen->add_option("--m", m, "size parameter (butterfly, fence)");
    gen->add_flag("--perturb", perturb, "perturb butterfly blue heights");
    gen->add_option("--kind", kind, "random kind: line|convex|general");
    gen->callback([&] {
        action = [&] {
            Matching M = [&]() -> Matching {
                if (family == "star")
                    return make_star(n);
                if (family == "butterfly")
                    return make_butterfly(m, perturb);
                if (family == "fence")
                    return make_fence(m).first;
                if (family == "random") {
                    const SampleKind k = kind == "line"     ? SampleKind::RedOnLine
                                         : kind == "convex" ? SampleKind::Convex
                                         : kind == "general"
                                             ? SampleKind::General
                                             : throw Error(ErrorCode::InvalidArgument, "unknown kind " + kind);
                    return sample_random(k, n, g.seed);
                }
                throw Error(ErrorCode::InvalidArgument, "unknown family " + family);
            }();
            emit(g, to_json(M));
        };
    });

    // greedy, policy, shortest, longest, enumerate
    std::string policy_name = "first";
    std::uint64_t limit = 1000;
    auto* greedy = app.add_subcommand("greedy", "top-segment greedy (red-on-a-line)");
    greedy->callback([&] { action = [&] { emit(g, to_json(run_greedy_top(load_matching(g.in)))); }; });
    auto* policy = app.add_subcommand("policy", "untangle with a flip policy");
    policy->add_option("--policy", policy_name, "first|top|random");
    policy->callback([&] {
        action = [&] { emit(g, to_json(run_policy(load_matching(g.in), policy_of(policy_name, g.seed)))); };
    });
    auto* shortest = app.add_subcommand("shortest", "shortest untangle sequence");
    shortest->callback([&] {
        action = [&] { emit(g, search_json(shortest_untangle(load_matching(g.in), g.budget))); };
    });
    auto* longest = app.add_subcommand("longest", "longest untangle sequence");
    longest->callback([&] {
        action = [&] { emit(g, search_json(longest_untangle(load_matching(g.in), g.budget))); };
    });
    auto* enumerate = app.add_subcommand("enumerate", "list untangle sequences");
    enumerate->add_option("--limit", limit, "maximum number of sequences");
    enumerate->callback([&] {
        action = [&] {
            const Matching M = load_matching(g.in);
            const Enumeration e = enumerate_sequences(M, limit);
            Json seqs = Json::array();
            for (const auto& s : e.sequences)
                seqs.push_back(to_json(s));
            emit(g, Json{{"start", to_json(M)}, {"sequences", seqs}, {"truncated", e.truncated}});
        };
    });

    // potential
    std::optional<std::size_t> focal;
    auto* potential = app.add_subcommand("potential", "projection potentials");
    potential->add_option("--k", focal, "single focal rank (1-based)");
    potential->callback([&] {
        action = [&] {
            const Matching M = load_matching(g.in);
            std::ostringstream os;
            os << "rank\tphi_k\tbound\tword\n";
            bool ok = true;
            std::size_t total = 0;
            const auto rank = red_ranks(M);
            std::vector<std::size_t> by_rank(M.n());
            for (std::size_t i = 0; i < M.n(); ++i)
                by_rank[rank[i]] = i;
            for (std::size_t r = 0; r < M.n(); ++r) {
                const std::size_t k = by_rank[r];
                const std::size_t v = phi_k(M, k);
                total += v;
                if (focal && *focal != r + 1)
                    continue;
                const std::size_t b = phi_k_bound(M.n(), r + 1);
                ok = ok && v <= b;
                os << r + 1 << '\t' << v << '\t' << b << '\t' << inversion_word(M, k) << '\n';
            }
            ok = ok && total <= phi_total_bound(M.n());
            os << "phi\t" << total << '\t' << phi_total_bound(M.n()) << '\n';
            emit(g, os.str());
            if (!ok)
                throw CheckFailed{"potential exceeds its bound"};
        };
    });

    // track
    std::string seq_path;
    auto* track = app.add_subcommand("track", "state tracking along a sequence");
    track->add_option("--seq", seq_path, "sequence (JSON)")->required();
    track->callback([&] {
        action = [&] {
            const FlipSequence s = load_sequence(g, seq_path);
            const TrackResult t = track_sequence(s.start, s.steps);
            Json ids = Json::array(), traj = Json::array();
            for (std::size_t i = 0; i < t.pair_ids.size(); ++i) {
                ids.push_back(Json::array({t.pair_ids[i].first, t.pair_ids[i].second}));
                std::string w;
                for (PairState p : t.trajectories[i])
                    w += to_char(p);
                traj.push_back(w);
            }
            emit(g, Json{{"pair_ids", ids},
                         {"trajectories", traj},
                         {"transitions", t.transitions},
                         {"h_to_t", t.h_to_t.size()},
                         {"h_to_x", t.h_to_x.size()}});
        };
    });

    // reduce
    std::string formula_path, report_path, alpha_text = "1";
    bool decide = false, independence = true;
    auto* reduce_cmd = app.add_subcommand("reduce", "build the matching of a formula");
    reduce_cmd->add_option("--formula", formula_path, "formula text file")->required();
    reduce_cmd->add_option("--alpha", alpha_text, "approximation factor, rational >= 1");
    reduce_cmd->add_option("--report", report_path, "audit report (JSON)");
    reduce_cmd->add_flag("--decide", decide, "run the exact shortest search and decide");
    reduce_cmd->add_flag("!--no-independence", independence, "skip the gadget independence audit");
    reduce_cmd->callback([&] {
        action = [&] {
            const RpmFormula f = parse_formula(read_file(formula_path));
            const Coord alpha = parse_coord(alpha_text);
            AssemblyOptions opt;
            opt.independence_audit = independence;
            opt.budget = g.budget;
            const MPhi M = reduce(f, alpha, opt, true);
            emit(g, to_json(M.matching));
            Json audits = Json::array(), gadgets = Json::array(), vars = Json::array(),
                 clauses = Json::array();
            for (const auto& a : M.audits)
                audits.push_back(Json{{"step", a.step}, {"constraint", a.constraint}, {"ok", a.ok}});
            for (const auto& r : M.reports)
                gadgets.push_back(gadget_json(r));
            for (const auto& r : M.embedding.variables)
                vars.push_back(rect_json(r));
            for (const auto& r : M.embedding.clauses)
                clauses.push_back(rect_json(r));
            Json rep{{"variables", f.v()},
                     {"clauses", f.c()},
                     {"k", M.k},
                     {"points", 2 * M.matching.n()},
                     {"expected_points", M.expected_points()},
                     {"max_bits", M.max_bits},
                     {"embedding", Json{{"variables", vars}, {"clauses", clauses}}},
                     {"audits", audits},
                     {"gadgets", gadgets},
                     {"audits_ok", M.audits_ok()}};
            if (decide) {
                const Decision d = decide_via_untangling(M, alpha, g.budget);
                rep["decision"] = Json{{"verdict", to_string(d.verdict)},
                                       {"length", d.length},
                                       {"threshold", to_string(d.threshold)},
                                       {"brute_force", brute_force_satisfiable(f)}};
            }
            if (!report_path.empty())
                write_file(report_path, rep.dump(2) + "\n");
            else if (!g.out.empty())
                std::cout << rep.dump(2) << "\n";
            if (!M.audits_ok())
                throw CheckFailed{"reduction audits failed"};
        };
    });

    // verify
    auto* verify = app.add_subcommand("verify", "check an untangle sequence");
    verify->add_option("--seq", seq_path, "sequence (JSON)")->required();
    verify->callback([&] {
        action = [&] {
            const Json j = parse_json(read_file(seq_path));
            const Matching start = g.in.empty() ? matching_from_json(j.at("start")) : load_matching(g.in);
            const VerificationReport r = verify_sequence(start, steps_from_json(j.at("steps")));
            Json out{{"valid", r.valid},
                     {"complete", r.complete},
                     {"final_crossings", r.final_crossings},
                     {"crossing_deltas", r.crossing_deltas}};
            if (r.first_invalid)
                out["first_invalid"] = *r.first_invalid;
            emit(g, out);
            if (!r.valid || !r.complete)
                throw CheckFailed{r.valid ? "sequence leaves crossings" : "sequence has an invalid flip"};
        };
    });

    // render
    std::string render_seq;
    auto* render = app.add_subcommand("render", "SVG of a matching or of every sequence step");
    render->add_option("--seq", render_seq, "sequence (JSON); --out is then a file prefix");
    render->callback([&] {
        action = [&] {
            if (render_seq.empty()) {
                emit(g, render_svg(load_matching(g.in)));
                return;
            }
            if (g.out.empty())
                throw Error(ErrorCode::InvalidArgument, "--out prefix is required with --seq");
            const auto frames = render_svg(load_sequence(g, render_seq));
            for (std::size_t i = 0; i < frames.size(); ++i) {
                std::ostringstream name;
                name << g.out << "-" << std::setw(3) << std::setfill('0') << i << ".svg";
                write_file(name.str(), frames[i]);
            }
            std::cout << frames.size() << " frames\n";
        };
    });

    // report
    std::size_t max_n = 7, trials = 2;
    auto* report = app.add_subcommand("report", "bound checks on stars, butterflies, fences, samples");
    report->add_option("--max-n", max_n, "largest instance size");
    report->add_option("--trials", trials, "random samples per size and kind");
    report->callback([&] {
        action = [&] {
            const auto rows = table1_report(max_n, trials, g.seed, g.budget);
            emit(g, format_table(rows));
            for (const auto& r : rows)
                if (!r.ok())
                    throw CheckFailed{"instance " + r.id + " violates a bound"};
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    try {
        action();
    } catch (const CheckFailed& e) {
        std::cerr << "check failed: " << e.what << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::ParseError ? 1 : 2;
    } catch (const Json::exception& e) {
        std::cerr << "ParseError: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace untangle

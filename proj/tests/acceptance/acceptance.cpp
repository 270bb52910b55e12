// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "fixtures.hpp"

#include "strtour/cli.hpp"
#include "strtour/errors.hpp"
#include "strtour/euler_str.hpp"
#include "strtour/generate.hpp"
#include "strtour/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace strtour;

namespace {

struct Criterion {
    int number;
    std::string title;
    bool ok = true;
    std::string failure;
    std::string summary;

    void check(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            failure = what;
        }
        if (!cond) {
            ++failures;
        }
    }
    std::uint64_t failures = 0;
};

// ceil(log2(h + 1)) without touching the library's helper.
std::uint64_t ceil_log2_plus_one(std::uint64_t h) {
    std::uint64_t k = 0;
    while ((std::uint64_t{1} << k) < h + 1) {
        ++k;
    }
    return k;
}

std::uint64_t pass_allowance(std::uint64_t h) { return 6 + 8 * ceil_log2_plus_one(h) + 1; }

int cli_solve(const std::filesystem::path& in, const std::filesystem::path& out) {
    const std::string a = in.string();
    const std::string b = out.string();
    const char* argv[] = {"strtour", "solve", "--in", a.c_str(), "--out", b.c_str()};
    std::ostringstream o, e;
    return cli::run(6, argv, o, e);
}

std::string where(std::uint32_t n, std::uint64_t m, std::uint64_t seed) {
    return "n=" + std::to_string(n) + " m=" + std::to_string(m) + " seed=" + std::to_string(seed);
}

std::uint64_t phase2_passes(const std::vector<PassRecord>& passes) {
    std::uint64_t k = 0;
    for (const auto& p : passes) {
        k += p.phase == kPhase2;
    }
    return k;
}

} // namespace

int main() {
    Criterion c1{1, "correctness sweep"};
    Criterion c2{2, "rejection sweep"};
    Criterion c3{3, "height halving"};
    Criterion c4{4, "pass budget"};
    Criterion c5{5, "memory budget"};
    Criterion c6{6, "stream budget"};
    Criterion c7{7, "nine-vertex golden"};
    Criterion c8{8, "oracle equivalence"};
    Criterion c9{9, "tree invariant"};

    const std::vector<std::pair<std::uint32_t, std::uint64_t>> grid = {{10, 20}, {100, 400}, {1000, 5000}};
    fixtures::TempDir dir;
    double solve_seconds = 0;
    std::uint64_t instances = 0;
    std::map<std::uint32_t, std::uint64_t> phase2_records;
    double worst_word_ratio = 0;
    std::uint64_t worst_stream_slack = ~std::uint64_t{0};
    std::uint64_t tree_checks = 0;

    for (auto [n, m] : grid) {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto at = where(n, m, seed);
            const auto g = gen_eulerian(n, m, seed);
            ++instances;

            // 1: through the command, tour read back from disk.
            write_graph_file(dir / "g.txt", g);
            const auto t0 = std::chrono::steady_clock::now();
            const int code = cli_solve(dir / "g.txt", dir / "t.txt");
            solve_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            c1.check(code == 0, "solve exit " + std::to_string(code) + " at " + at);
            if (code == 0) {
                const auto check = validate_tour(g, read_tour_file(dir / "t.txt"));
                c1.check(check.ok, check.message() + " at " + at);
            }

            // 2
            for (auto mode : {PerturbMode::OddDegree, PerturbMode::Disconnected}) {
                const auto bad = perturb(g, mode, seed);
                const auto expected = is_eulerian(bad);
                c2.check(!expected.eulerian, "oracle accepts perturbed graph at " + at);
                try {
                    solve(bad);
                    c2.check(false, "perturbed graph solved at " + at);
                } catch (const NotEulerian& e) {
                    c2.check(e.reason() == expected.reason,
                             std::string("reason mismatch: ") + e.what() + " vs " + expected.to_string() + " at " + at);
                }
            }

            SolveOptions opts;
            opts.capture_forest = true;
            SolveResult r;
            try {
                r = solve(g, opts);
            } catch (const std::exception& e) {
                for (auto* c : {&c4, &c5, &c6, &c8, &c9}) {
                    c->check(false, std::string(e.what()) + " at " + at);
                }
                continue;
            }

            // 3 also holds on the sweep trees.
            c3.check(r.merges.size() <= ceil_log2_plus_one(r.tree_height), "too many merge iterations at " + at);
            for (const auto& it : r.merges) {
                c3.check(it.height_after == it.height_before / 2, "height not halved at " + at);
            }

            // 4
            const auto p2 = phase2_passes(r.passes);
            c4.check(r.stats.streaming_passes + r.stats.sorting_passes == r.passes.size(),
                     "pass records disagree with counters at " + at);
            c4.check(p2 == r.phase2.passes, "phase-2 count mismatch at " + at);
            c4.check(p2 <= pass_allowance(r.tree_height), "phase-2 passes " + std::to_string(p2) + " > " +
                                                               std::to_string(pass_allowance(r.tree_height)) + " at " + at);

            // 5
            std::uint64_t p1_words = 0;
            for (const auto& p : r.passes) {
                if (p.phase == kPhase1) {
                    p1_words = std::max(p1_words, p.peak_live_words);
                } else if (p.phase == kPhase2) {
                    phase2_records[n] = std::max(phase2_records[n], p.peak_live_records);
                    c5.check(p.peak_live_records <= 4, "phase-2 pass " + p.label + " holds " +
                                                           std::to_string(p.peak_live_records) + " records at " + at);
                }
            }
            c5.check(p1_words <= 10 * std::uint64_t{n},
                     "phase-1 words " + std::to_string(p1_words) + " > 10n at " + at);
            worst_word_ratio = std::max(worst_word_ratio, static_cast<double>(p1_words) / n);

            // 6
            const auto limit = 2 * g.m() + 4;
            c6.check(g.m() <= limit, "input over budget at " + at);
            for (const auto& p : r.passes) {
                c6.check(p.items_out <= limit, "pass " + std::to_string(p.index) + " (" + p.label + ") wrote " +
                                                   std::to_string(p.items_out) + " > " + std::to_string(limit) +
                                                   " at " + at);
            }
            c6.check(r.stats.peak_stream_items <= limit, "peak stream over budget at " + at);
            worst_stream_slack = std::min(worst_stream_slack, limit - std::min(limit, r.stats.peak_stream_items));

            // 8
            if (r.forest) {
                try {
                    const auto check = validate_tour(g, euler_tree_reference(*r.forest));
                    c8.check(check.ok, check.message() + " at " + at);
                } catch (const std::exception& e) {
                    c8.check(false, std::string(e.what()) + " at " + at);
                }
            } else {
                c8.check(false, "no forest captured at " + at);
            }

            // 9
            c9.check(r.tree_check.checks == r.circuits, "tree checked " + std::to_string(r.tree_check.checks) +
                                                            " times for " + std::to_string(r.circuits) +
                                                            " circuits at " + at);
            c9.check(r.tree_check.violations == 0, std::to_string(r.tree_check.violations) + " violations at " + at);
            tree_checks += r.tree_check.checks;
        }
    }
    c1.check(solve_seconds < 60.0, "sweep took " + std::to_string(solve_seconds) + " s");

    // 3 and 4 on chain gadgets of known height.
    for (std::uint32_t h = 1; h <= 16; ++h) {
        const auto at = "chain h=" + std::to_string(h);
        SolveOptions opts;
        opts.forced_circuits = fixtures::chain_circuits(h);
        const auto g = fixtures::graph_of(fixtures::chain_vertices(h), opts.forced_circuits);
        try {
            const auto r = solve(g, opts);
            c3.check(r.tree_height == h, "tree height " + std::to_string(r.tree_height) + " at " + at);
            std::uint64_t expect = h;
            for (const auto& it : r.merges) {
                c3.check(it.height_before == expect, "height before " + std::to_string(it.height_before) + " at " + at);
                c3.check(it.height_after == expect / 2,
                         "height after " + std::to_string(it.height_after) + " at " + at);
                expect /= 2;
            }
            c3.check(expect == 0, "merging stopped above height 0 at " + at);
            c3.check(r.merges.size() <= ceil_log2_plus_one(h), std::to_string(r.merges.size()) + " iterations at " + at);
            c3.check(validate_tour(g, r.tour).ok, "tour invalid at " + at);
            const auto p2 = phase2_passes(r.passes);
            c4.check(p2 <= pass_allowance(h), "phase-2 passes " + std::to_string(p2) + " at " + at);
            c4.check(p2 == r.phase2.passes, "phase-2 count mismatch at " + at);
        } catch (const std::exception& e) {
            c3.check(false, std::string(e.what()) + " at " + at);
        }
    }
    c4.summary = "phase-2 passes within 6 + 8*ceil(log2(h+1)) + 1";

    // 7
    try {
        const auto g = fixtures::nine_vertex_graph();
        PassEngine engine;
        const auto p1 = find_circuits_forced(engine, engine.load(graph_edge_items(g)), g.n,
                                             fixtures::nine_vertex_circuits());
        std::set<CircuitId> nodes;
        std::set<std::pair<CircuitId, CircuitId>> edges;
        for (const auto& e : p1.rooted_tree) {
            nodes.insert(e.parent);
            nodes.insert(e.child);
            edges.insert(std::minmax(e.parent, e.child));
        }
        c7.check(nodes == std::set<CircuitId>{1, 2, 3, 4}, "tree vertices differ");
        c7.check(edges == std::set<std::pair<CircuitId, CircuitId>>{{1, 2}, {1, 4}, {3, 4}}, "tree edges differ");
        const auto flag1 = [&] {
            std::vector<InfoEdge> out;
            for (const auto& e : fixtures::only<InfoEdge>(engine.read(p1.stream))) {
                if (e.mark == 1) {
                    out.push_back(e);
                }
            }
            return out;
        }();
        c7.check(flag1.size() == 1, std::to_string(flag1.size()) + " flag-1 info edges");
        if (flag1.size() == 1) {
            c7.check(flag1[0].pred == 3 && flag1[0].succ == 5 && flag1[0].cvertex == 2,
                     "flag-1 info edge is " + encode_item(flag1[0]));
        }

        SolveOptions opts;
        opts.forced_circuits = fixtures::nine_vertex_circuits();
        const auto r = solve(g, opts);
        const auto check = validate_tour(g, r.tour);
        c7.check(check.ok, check.message());
    } catch (const std::exception& e) {
        c7.check(false, e.what());
    }

    std::ostringstream s;
    s << instances << " instances, solve time " << solve_seconds << " s";
    c1.summary = s.str();
    c2.summary = std::to_string(2 * instances) + " perturbed graphs";
    c3.summary = "chains h=1..16 and every sweep tree";
    s.str("");
    s << "phase-1 words/n max " << worst_word_ratio << ", phase-2 records max";
    for (auto [n, k] : phase2_records) {
        s << " n=" << n << ":" << k;
    }
    c5.summary = s.str();
    c6.summary = "smallest slack " + std::to_string(worst_stream_slack) + " items";
    c7.summary = "tree {1,2},{1,4},{3,4}; flag-1 (3,5) at v2";
    c8.summary = std::to_string(instances) + " reference tours";
    c9.summary = std::to_string(tree_checks) + " insertions checked";

    bool all = true;
    for (const auto* c : {&c1, &c2, &c3, &c4, &c5, &c6, &c7, &c8, &c9}) {
        all = all && c->ok;
        std::cout << (c->ok ? "PASS" : "FAIL") << " criterion " << c->number << " " << c->title << ": "
                  << (c->ok ? c->summary : c->failure + " (" + std::to_string(c->failures) + " failures)") << "\n";
    }
    return all ? 0 : 1;
}

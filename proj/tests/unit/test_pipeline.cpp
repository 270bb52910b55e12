#include "fixtures.hpp"

#include "strtour/errors.hpp"
#include "strtour/euler_str.hpp"
#include "strtour/generate.hpp"

#include <doctest.h>

#include <filesystem>

using namespace strtour;
using fixtures::walk;

TEST_CASE("triangle through the whole pipeline") {
    const auto r = solve(fixtures::triangle());
    CHECK(r.tour == Tour{{1, 2}, {2, 3}, {3, 1}});
    CHECK(r.merges.empty());
    CHECK(r.tree_height == 0);
    CHECK(r.stats.circuits_found == 1);
    CHECK(r.phase2.passes == 7);
}

TEST_CASE("bowtie gives a validated six-edge tour") {
    const auto g = fixtures::graph_of(5, {walk({1, 2, 3}), walk({1, 4, 5})});
    CHECK(is_eulerian(g).eulerian);
    const auto r = solve(g);
    CHECK(r.tour.size() == 6);
    CHECK(validate_tour(g, r.tour).ok);
}

TEST_CASE("nine-vertex instance with the forced circuit order") {
    SolveOptions opts;
    opts.forced_circuits = fixtures::nine_vertex_circuits();
    opts.capture_forest = true;
    const auto g = fixtures::nine_vertex_graph();
    const auto r = solve(g, opts);

    CHECK(r.rooted_tree == std::vector<RootedTreeEdge>{{1, 2, 0, 7}, {1, 4, 0, 5}, {4, 3, 1, 1}});
    CHECK(r.phase1_tree_height == 2);
    CHECK(r.tree_height == 3);
    CHECK(r.merges.size() == 2);
    CHECK(r.stats.merge_iterations == 2);
    CHECK(r.tour.size() == 16);
    CHECK(validate_tour(g, r.tour).ok);
    CHECK(r.stats.peak_stream_items == 20);
    CHECK(r.stream_budget.ok);
    CHECK(r.phase2.passes == 6 + 8 * 2 + 1);

    REQUIRE(r.forest);
    CHECK(validate_tour(g, euler_tree_reference(*r.forest)).ok);
}

TEST_CASE("non-Eulerian inputs are reported with their reason") {
    const auto g = gen_eulerian(40, 100, 3);
    for (auto mode : {PerturbMode::OddDegree, PerturbMode::Disconnected}) {
        const auto bad = perturb(g, mode, 3);
        const auto expected = is_eulerian(bad);
        REQUIRE_FALSE(expected.eulerian);
        try {
            solve(bad);
            FAIL("expected NotEulerian");
        } catch (const NotEulerian& e) {
            CHECK(e.reason() == expected.reason);
        }
    }
}

TEST_CASE("graphs that are not simple are rejected before any pass") {
    CHECK_THROWS_AS(solve(Graph{3, {{1, 2}, {2, 1}, {1, 3}}}), InputError);
}

TEST_CASE("empty graph gives an empty tour") {
    const auto r = solve(Graph{4, {}});
    CHECK(r.tour.empty());
}

TEST_CASE("trace mode keeps every stream") {
    fixtures::TempDir dir;
    SolveOptions opts;
    opts.engine.trace_dir = dir.path();
    const auto r = solve(fixtures::triangle(), opts);
    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
        (void)e;
        ++files;
    }
    CHECK(files == r.passes.size() + 1);
    CHECK(std::filesystem::exists(dir / "001_phase1_circuit_find.stream"));
}

TEST_CASE("budgets hold on generated graphs") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        for (auto [n, m] : {std::pair<std::uint32_t, std::uint64_t>{10, 20}, {100, 400}}) {
            const auto g = gen_eulerian(n, m, seed);
            SolveOptions opts;
            opts.capture_forest = true;
            const auto r = solve(g, opts);
            CHECK(validate_tour(g, r.tour).ok);
            CHECK(r.phase1.peak_live_words <= 10 * std::uint64_t{n});
            CHECK(r.phase2.peak_live_records <= 4);
            CHECK(r.stats.peak_stream_items <= 2 * g.m() + 4);
            CHECK(r.phase2.passes <= phase2_pass_bound(r.tree_height));
            CHECK(r.merges.size() <= merge_iteration_bound(r.tree_height));
            CHECK(r.tree_check.violations == 0);
            REQUIRE(r.forest);
            CHECK(validate_tour(g, euler_tree_reference(*r.forest)).ok);
        }
    }
}

TEST_CASE("relabel sweep gives the same tour") {
    const auto g = gen_eulerian(100, 400, 9);
    SolveOptions sweep;
    sweep.phase1.fidelity_relabel = true;
    CHECK(solve(g).tour == solve(g, sweep).tour);
}

#include "strtour/euler_str.hpp"

#include "strtour/errors.hpp"
#include "strtour/tree_prep.hpp"

#include <algorithm>
#include <string>

namespace strtour {

PhasePeaks phase_peaks(const std::vector<PassRecord>& passes, std::string_view phase) {
    PhasePeaks p;
    for (const auto& r : passes) {
        if (r.phase != phase) {
            continue;
        }
        ++p.passes;
        if (r.kind == PassKind::Streaming) {
            ++p.streaming_passes;
            p.peak_live_words = std::max(p.peak_live_words, r.peak_live_words);
            p.peak_live_records = std::max(p.peak_live_records, r.peak_live_records);
        } else {
            ++p.sorting_passes;
        }
    }
    return p;
}

std::uint64_t phase2_pass_bound(std::uint64_t height) { return 6 + 8 * merge_iteration_bound(height) + 1; }

SolveResult solve(const Graph& g, const SolveOptions& options) {
    validate_simple_graph(g);

    PassEngine engine(options.engine);
    const auto items = graph_edge_items(g);
    const auto input = engine.load(items);

    engine.set_phase(std::string(kPhase1));
    auto p1 = options.forced_circuits.empty()
                  ? find_circuits(engine, input, g.n, options.phase1)
                  : find_circuits_forced(engine, input, g.n, options.forced_circuits, options.phase1);
    if (p1.tree_check.violations != 0) {
        throw IntegrityFault("connectivity tree invariant failed " + std::to_string(p1.tree_check.violations) +
                             " times");
    }

    SolveResult result;
    if (options.capture_forest) {
        result.forest = forest_from_stream(p1.stream);
    }

    engine.set_phase(std::string(kPhase2));
    auto prepared = prepare_tree(engine, p1.stream);
    engine.stats().tree_height = std::max(engine.stats().tree_height, prepared.height);
    auto merged = run_merges(engine, prepared);
    result.tour = emit_tour(engine, merged.stream);

    if (result.tour.size() != g.m()) {
        throw IntegrityFault("tour has " + std::to_string(result.tour.size()) + " edges, graph has " +
                             std::to_string(g.m()));
    }
    result.stream_budget = assert_stream_budget(engine.stats(), g.m());
    if (!result.stream_budget.ok) {
        throw IntegrityFault(result.stream_budget.message());
    }

    result.stats = engine.stats();
    result.passes = engine.passes();
    result.merges = std::move(merged.reports);
    result.circuits = p1.circuits;
    result.tree_height = prepared.height;
    result.phase1_tree_height = p1.tree_height;
    result.rooted_tree = std::move(p1.rooted_tree);
    result.tree_check = p1.tree_check;
    result.phase1 = phase_peaks(result.passes, kPhase1);
    result.phase2 = phase_peaks(result.passes, kPhase2);
    if (result.phase2.passes > phase2_pass_bound(result.tree_height)) {
        throw IntegrityFault("phase 2 used " + std::to_string(result.phase2.passes) + " passes, bound is " +
                             std::to_string(phase2_pass_bound(result.tree_height)));
    }
    return result;
}

} // namespace strtour

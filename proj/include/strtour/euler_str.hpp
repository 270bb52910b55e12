#pragma once

#include "strtour/circuit_find.hpp"
#include "strtour/engine.hpp"
#include "strtour/graph.hpp"
#include "strtour/oracle.hpp"
#include "strtour/tree_merge.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace strtour {

inline constexpr std::string_view kPhase1 = "phase1";
inline constexpr std::string_view kPhase2 = "phase2";

struct SolveOptions {
    Phase1Options phase1;
    EngineOptions engine;
    /// Keep the phase-1 decomposition and tree in RAM for the reference merger.
    bool capture_forest = false;
    /// Prescribed circuit order for phase 1; empty means cut from the buffer.
    std::vector<Circuit> forced_circuits;
};

/// Peak live state over the passes of one phase.
struct PhasePeaks {
    std::uint64_t passes = 0;
    std::uint64_t streaming_passes = 0;
    std::uint64_t sorting_passes = 0;
    std::uint64_t peak_live_words = 0;
    std::uint64_t peak_live_records = 0;
};

PhasePeaks phase_peaks(const std::vector<PassRecord>& passes, std::string_view phase);

struct SolveResult {
    Tour tour;
    PassStats stats;
    std::vector<PassRecord> passes;
    std::vector<MergeIterationReport> merges;
    std::uint64_t circuits = 0;
    /// Height of T (T̄ plus one leaf per flag-1 circuit) after depth completion.
    std::uint64_t tree_height = 0;
    /// Height of T̄ alone as rooted in phase 1.
    std::uint64_t phase1_tree_height = 0;
    std::vector<RootedTreeEdge> rooted_tree;
    TreeCheckReport tree_check;
    BudgetCheck stream_budget;
    PhasePeaks phase1;
    PhasePeaks phase2;
    std::optional<CircuitForest> forest;
};

/// Phase-2 pass allowance: 6 for preparation, 8 per merge iteration, 1 to emit.
std::uint64_t phase2_pass_bound(std::uint64_t height);

/// Full pipeline. Throws NotEulerian, InputError for graphs that are not
/// simple, and IntegrityFault when an internal check fails (including the
/// stream-length and tree invariants).
SolveResult solve(const Graph& g, const SolveOptions& options = {});

} // namespace strtour

#pragma once

#include "strtour/engine.hpp"
#include "strtour/graph.hpp"
#include "strtour/tree_prep.hpp"

#include <cstdint>
#include <vector>

namespace strtour {

struct MergeIterationReport {
    std::uint64_t iteration = 0;
    std::uint64_t circuits_before = 0;
    std::uint64_t circuits_after = 0;
    std::uint64_t height_before = 0;
    std::uint64_t height_after = 0;
    std::uint64_t passes = 0;
    std::uint64_t peak_live_records = 0;
};

/// Info edge in merge-ready form: reversed with mark 1 when the parent depth
/// is odd, unchanged otherwise.
InfoEdge armed(const InfoEdge& e);

/// One streaming pass that puts a stream with plain (i, j, d, v, 0) info
/// edges into merge-ready form.
ArmedStream mark_odd_depth_edges(PassEngine& engine, const Stream& input);

struct MergeStep {
    ArmedStream output;
    MergeIterationReport report;
};

/// Merges every odd-depth circuit into its parent and halves the tree height.
/// Four sorts and four streams; the last stream also prepares the next
/// iteration's input.
MergeStep merge_iteration(PassEngine& engine, const ArmedStream& input, std::uint64_t iteration = 1);

struct MergeResult {
    Stream stream;
    std::vector<MergeIterationReport> reports;
};

/// Iterates merge_iteration until no info edges remain. Throws IntegrityFault
/// if the height does not halve or more than bit_width(h) iterations run.
MergeResult run_merges(PassEngine& engine, const ArmedStream& input);

/// Sorts the single remaining circuit by position and reads off the tour.
Tour emit_tour(PassEngine& engine, const Stream& merged);

/// ceil(log2(h + 1)): iterations needed to bring height h down to 0.
std::uint64_t merge_iteration_bound(std::uint64_t height);

} // namespace strtour

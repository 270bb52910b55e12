#pragma once

#include "strtour/engine.hpp"

#include <cstdint>

namespace strtour {

/// A stream ready for a merge iteration: every circuit is numbered 1..l from
/// the vertex it shares with its parent, each non-root circuit has one info
/// edge carrying its parent's depth, and the info edges with an odd parent
/// depth are stored reversed with mark 1 (the first step of a merge
/// iteration, folded into the pass that produced the stream).
struct ArmedStream {
    Stream stream;
    std::uint64_t info_edges = 0;
    /// Height of the circuit tree; 0 when there are no info edges.
    std::uint64_t height = 0;
};

/// Info edges (i, j, d, v, 0) first, then circuit j's graph edges by position.
SortOrder circuit_order();

/// Renumbers every circuit that owns a flag-0 info edge so that its first
/// edge leaves the shared vertex. Two sorts and two streams.
Stream rotate_member_circuits(PassEngine& engine, const Stream& input);

/// Fills the parent depth into flag-1 info edges. Two streams and one sort.
Stream complete_depths(PassEngine& engine, const Stream& input);

/// rotate_member_circuits followed by complete_depths, with the depth
/// request folded into the rotation's second stream and the odd-depth
/// marking folded into the final stream: six passes in total.
ArmedStream prepare_tree(PassEngine& engine, const Stream& phase1_output);

} // namespace strtour

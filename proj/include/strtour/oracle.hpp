#pragma once

#include "strtour/circuit_find.hpp"
#include "strtour/errors.hpp"
#include "strtour/graph.hpp"
#include "strtour/stream.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace strtour {

/// Adjacency lists of (neighbour, edge id), edge ids 1..m, sorted by neighbour.
struct AdjacencyGraph {
    std::uint32_t n = 0;
    std::uint64_t m = 0;
    std::vector<std::vector<std::pair<Vertex, std::uint64_t>>> adjacency;

    explicit AdjacencyGraph(const Graph& g);
    std::size_t degree(Vertex v) const { return adjacency[v].size(); }
};

struct EulerVerdict {
    bool eulerian = true;
    NotEulerianReason reason = NotEulerianReason::OddDegree;

    explicit operator bool() const { return eulerian; }
    std::string to_string() const;
};

/// Even degrees first, then one component over positive-degree vertices.
EulerVerdict is_eulerian(const AdjacencyGraph& g);
EulerVerdict is_eulerian(const Graph& g);

/// Iterative Hierholzer from the lowest vertex of positive degree, always
/// taking the lowest unused neighbour. Nothing if the graph is not Eulerian.
std::optional<Tour> hierholzer(const Graph& g);

struct ForestEdge {
    CircuitId parent = 0;
    CircuitId child = 0;
    Vertex cvertex = 0;
};

/// Circuits plus an out-tree over their ids. Each child's first edge leaves
/// the vertex it shares with its parent.
struct CircuitForest {
    std::vector<Circuit> circuits;
    std::vector<ForestEdge> tree;
};

/// Checks the forest invariants; throws IntegrityFault naming the first one
/// broken.
void check_forest(const CircuitForest& forest);

/// Walks the root circuit and, before taking each edge, descends into every
/// unvisited child whose first vertex is the current vertex (lowest child id
/// first). Throws IntegrityFault on a malformed forest.
Tour euler_tree_reference(const CircuitForest& forest);

/// Builds a forest in RAM from a phase-1 output stream: circuits from the
/// graph edges, tree edges from both kinds of info edge, children rotated to
/// their shared vertex.
CircuitForest forest_from_stream(const Stream& phase1_output);
CircuitForest forest_from_items(const std::vector<StreamItem>& items);

enum class TourRule { Coverage, Chaining, Closure };

const char* to_string(TourRule rule);

struct TourCheck {
    bool ok = true;
    /// First failing index (0-based step); for missing edges, the tour length.
    std::size_t index = 0;
    TourRule rule = TourRule::Coverage;
    std::string detail;

    explicit operator bool() const { return ok; }
    std::string message() const;
};

/// Coverage (each edge exactly once), then chaining, then closure.
TourCheck validate_tour(const Graph& g, const Tour& tour);

} // namespace strtour

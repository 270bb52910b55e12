#pragma once

#include "strtour/records.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <utility>
#include <vector>

namespace strtour {

struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected simple graph on vertices 1..n, edges in input order.
struct Graph {
    std::uint32_t n = 0;
    std::vector<Edge> edges;

    std::uint64_t m() const { return edges.size(); }
};

/// Directed edge in tour order.
struct TourStep {
    Vertex tail = 0;
    Vertex head = 0;

    friend bool operator==(const TourStep&, const TourStep&) = default;
};

using Tour = std::vector<TourStep>;

/// Graph file: first line "n m", then m lines "u v". Throws ParseError.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::filesystem::path& path);
void write_graph(std::ostream& out, const Graph& g);
void write_graph_file(const std::filesystem::path& path, const Graph& g);

/// Rejects labels outside 1..n, self-loops and repeated edges (InputError).
void validate_simple_graph(const Graph& g);

/// Tour file: one "u v" line per step.
Tour read_tour(std::istream& in);
Tour read_tour_file(const std::filesystem::path& path);
void write_tour(std::ostream& out, const Tour& tour);
void write_tour_file(const std::filesystem::path& path, const Tour& tour);

/// Initial stream: one graph edge (u, v, 0, 0, 0, 0) per input edge.
std::vector<StreamItem> graph_edge_items(const Graph& g);

} // namespace strtour

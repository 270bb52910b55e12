#include "strtour/graph.hpp"

#include "strtour/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_set>

namespace strtour {

namespace {

// Reads "a b" from a line; both base-10, separated by whitespace.
std::pair<std::uint64_t, std::uint64_t> parse_pair(const std::string& line, std::uint64_t line_no) {
    std::uint64_t vals[2] = {0, 0};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int i = 0; i < 2; ++i) {
        while (p < end && (*p == ' ' || *p == '\t')) {
            ++p;
        }
        auto [next, ec] = std::from_chars(p, end, vals[i]);
        if (ec != std::errc{} || next == p) {
            throw ParseError(line_no, "expected two non-negative integers");
        }
        p = next;
    }
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) {
        ++p;
    }
    if (p != end) {
        throw ParseError(line_no, "trailing characters");
    }
    return {vals[0], vals[1]};
}

Vertex to_vertex(std::uint64_t v, std::uint64_t line_no) {
    if (v > std::numeric_limits<Vertex>::max()) {
        throw ParseError(line_no, "vertex label out of range");
    }
    return static_cast<Vertex>(v);
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    return out;
}

} // namespace

Graph read_graph(std::istream& in) {
    std::string line;
    std::uint64_t line_no = 0;
    if (!std::getline(in, line)) {
        throw ParseError(1, "missing header line \"n m\"");
    }
    ++line_no;
    auto [n, m] = parse_pair(line, line_no);
    if (n > std::numeric_limits<Vertex>::max()) {
        throw ParseError(line_no, "vertex count out of range");
    }
    Graph g;
    g.n = static_cast<std::uint32_t>(n);
    g.edges.reserve(std::min<std::uint64_t>(m, std::uint64_t{1} << 20));
    while (g.edges.size() < m) {
        if (!std::getline(in, line)) {
            throw ParseError(line_no + 1, "expected " + std::to_string(m) + " edges, found " +
                                              std::to_string(g.edges.size()));
        }
        ++line_no;
        auto [u, v] = parse_pair(line, line_no);
        if (u < 1 || u > n || v < 1 || v > n) {
            throw ParseError(line_no, "vertex label outside 1.." + std::to_string(n));
        }
        g.edges.push_back({to_vertex(u, line_no), to_vertex(v, line_no)});
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            throw ParseError(line_no, "more edge lines than declared");
        }
    }
    return g;
}

Graph read_graph_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
    out << g.n << ' ' << g.m() << '\n';
    for (const auto& e : g.edges) {
        out << e.u << ' ' << e.v << '\n';
    }
}

void write_graph_file(const std::filesystem::path& path, const Graph& g) {
    auto out = open_out(path);
    write_graph(out, g);
}

void validate_simple_graph(const Graph& g) {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(g.edges.size() * 2);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        const auto where = " (edge " + std::to_string(i + 1) + ": " + std::to_string(e.u) + " " + std::to_string(e.v) + ")";
        if (e.u < 1 || e.u > g.n || e.v < 1 || e.v > g.n) {
            throw InputError("vertex label outside 1.." + std::to_string(g.n) + where);
        }
        if (e.u == e.v) {
            throw InputError("self-loop" + where);
        }
        auto lo = std::min(e.u, e.v);
        auto hi = std::max(e.u, e.v);
        if (!seen.insert((std::uint64_t{lo} << 32) | hi).second) {
            throw InputError("duplicate edge" + where);
        }
    }
}

Tour read_tour(std::istream& in) {
    Tour tour;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        auto [u, v] = parse_pair(line, line_no);
        tour.push_back({to_vertex(u, line_no), to_vertex(v, line_no)});
    }
    return tour;
}

Tour read_tour_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_tour(in);
}

void write_tour(std::ostream& out, const Tour& tour) {
    for (const auto& s : tour) {
        out << s.tail << ' ' << s.head << '\n';
    }
}

void write_tour_file(const std::filesystem::path& path, const Tour& tour) {
    auto out = open_out(path);
    write_tour(out, tour);
}

std::vector<StreamItem> graph_edge_items(const Graph& g) {
    std::vector<StreamItem> items;
    items.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        items.emplace_back(GraphEdge{e.u, e.v, 0, 0, 0, 0});
    }
    return items;
}

} // namespace strtour

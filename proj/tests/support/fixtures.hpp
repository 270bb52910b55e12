#pragma once

#include "strtour/circuit_find.hpp"
#include "strtour/engine.hpp"
#include "strtour/graph.hpp"

#include <filesystem>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using namespace strtour;

/// Closed walk through the listed vertices, back to the first.
inline Circuit walk(std::initializer_list<Vertex> vs) {
    Circuit c;
    std::vector<Vertex> v(vs);
    for (std::size_t i = 0; i < v.size(); ++i) {
        c.edges.push_back({v[i], v[(i + 1) % v.size()]});
    }
    return c;
}

inline Graph graph_of(std::uint32_t n, const std::vector<Circuit>& circuits) {
    Graph g;
    g.n = n;
    for (const auto& c : circuits) {
        for (const auto& s : c.edges) {
            g.edges.push_back({s.tail, s.head});
        }
    }
    return g;
}

inline Graph triangle() { return graph_of(3, {walk({1, 2, 3})}); }

// Nine-vertex instance, circuits in discovery order:
//   C1 5-7-8, C2 6-7-9, C3 1-2-3-4, C4 5-1-9, C5 2-4-6.
inline std::vector<Circuit> nine_vertex_circuits() {
    return {walk({5, 7, 8}), walk({6, 7, 9}), walk({1, 2, 3, 4}), walk({5, 1, 9}), walk({2, 4, 6})};
}

inline Graph nine_vertex_graph() { return graph_of(9, nine_vertex_circuits()); }

/// Triangles C_k = a_k, b_k, a_{k+1} with a_k = 2k - 1, b_k = 2k; C_k and
/// C_{k+1} share a_{k+1}. In this order the tree is a path of height h.
inline std::vector<Circuit> chain_circuits(std::uint32_t h) {
    std::vector<Circuit> cs;
    for (std::uint32_t k = 1; k <= h + 1; ++k) {
        cs.push_back(walk({2 * k - 1, 2 * k, 2 * k + 1}));
    }
    return cs;
}

inline std::uint32_t chain_vertices(std::uint32_t h) { return 2 * (h + 1) + 1; }

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("strtour-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

template <class T>
std::vector<T> only(const std::vector<StreamItem>& items) {
    std::vector<T> out;
    for (const auto& item : items) {
        if (const auto* x = std::get_if<T>(&item)) {
            out.push_back(*x);
        }
    }
    return out;
}

} // namespace fixtures

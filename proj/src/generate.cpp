#include "strtour/generate.hpp"

#include "strtour/errors.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

namespace strtour {

std::uint64_t Rng::below(std::uint64_t bound) {
    const auto limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

namespace {

std::uint64_t pair_key(Vertex a, Vertex b) {
    if (a > b) {
        std::swap(a, b);
    }
    return (std::uint64_t{a} << 32) | b;
}

constexpr int kRestarts = 200;
constexpr int kCycleAttempts = 2000;

// One attempt; empty result if it got stuck.
std::vector<Edge> try_generate(std::uint32_t n, std::uint64_t lo, std::uint64_t hi, Rng& rng) {
    std::vector<Edge> edges;
    std::unordered_set<std::uint64_t> present;
    std::vector<Vertex> touched;
    std::vector<char> is_touched(std::size_t{n} + 1, 0);
    std::vector<Vertex> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        pool[i] = i + 1;
    }

    int failures = 0;
    while (edges.size() < lo) {
        if (failures > kCycleAttempts) {
            return {};
        }
        const auto room = hi - edges.size();
        if (room < 3) {
            return {};
        }
        const auto len = rng.between(3, std::min<std::uint64_t>(n, room));
        // Partial Fisher-Yates for len distinct vertices; after the first
        // cycle, slot 0 is an already-touched vertex.
        std::vector<Vertex> cycle;
        cycle.reserve(len);
        if (!touched.empty()) {
            cycle.push_back(touched[rng.below(touched.size())]);
            auto it = std::find(pool.begin(), pool.end(), cycle[0]);
            std::iter_swap(pool.begin(), it);
        }
        for (std::size_t i = cycle.size(); i < len; ++i) {
            const auto j = i + rng.below(n - i);
            std::swap(pool[i], pool[j]);
            cycle.push_back(pool[i]);
        }
        bool clash = false;
        for (std::size_t i = 0; i < len && !clash; ++i) {
            clash = present.count(pair_key(cycle[i], cycle[(i + 1) % len])) != 0;
        }
        if (clash) {
            ++failures;
            continue;
        }
        failures = 0;
        for (std::size_t i = 0; i < len; ++i) {
            const Vertex u = cycle[i];
            const Vertex v = cycle[(i + 1) % len];
            present.insert(pair_key(u, v));
            edges.push_back({u, v});
            if (!is_touched[u]) {
                is_touched[u] = 1;
                touched.push_back(u);
            }
        }
    }
    return edges;
}

} // namespace

Graph gen_eulerian(std::uint32_t n, std::uint64_t target_m, std::uint64_t seed) {
    if (n < 3) {
        throw InputError("gen: n must be at least 3, got " + std::to_string(n));
    }
    if (target_m < 3) {
        throw InputError("gen: m must be at least 3, got " + std::to_string(target_m));
    }
    const auto max_edges = std::uint64_t{n} * (n - 1) / 2;
    const auto lo = (target_m * 9 + 9) / 10;
    const auto hi = target_m * 11 / 10;
    if (lo > max_edges) {
        throw InputError("gen: m = " + std::to_string(target_m) + " does not fit a simple graph on " +
                         std::to_string(n) + " vertices");
    }
    Rng rng(seed);
    for (int attempt = 0; attempt < kRestarts; ++attempt) {
        auto edges = try_generate(n, lo, hi, rng);
        if (edges.empty()) {
            continue;
        }
        Graph g;
        g.n = n;
        g.edges = std::move(edges);
        return g;
    }
    throw InputError("gen: no Eulerian graph with n = " + std::to_string(n) + " and m near " +
                     std::to_string(target_m) + " found");
}

PerturbMode parse_perturb_mode(std::string_view text) {
    if (text == "odd") {
        return PerturbMode::OddDegree;
    }
    if (text == "disconnected") {
        return PerturbMode::Disconnected;
    }
    throw InputError("unknown perturb mode '" + std::string(text) + "'");
}

Graph perturb(const Graph& g, PerturbMode mode, std::uint64_t seed) {
    Graph out = g;
    const auto fresh = g.n + 1;
    if (mode == PerturbMode::Disconnected) {
        out.n = g.n + 3;
        out.edges.push_back({fresh, fresh + 1});
        out.edges.push_back({fresh + 1, fresh + 2});
        out.edges.push_back({fresh + 2, fresh});
        return out;
    }
    std::vector<char> used(std::size_t{g.n} + 1, 0);
    std::vector<Vertex> candidates;
    for (const auto& e : g.edges) {
        for (auto v : {e.u, e.v}) {
            if (!used[v]) {
                used[v] = 1;
                candidates.push_back(v);
            }
        }
    }
    if (candidates.empty()) {
        throw InputError("perturb: graph has no edges");
    }
    std::sort(candidates.begin(), candidates.end());
    Rng rng(seed);
    out.n = g.n + 1;
    out.edges.push_back({candidates[rng.below(candidates.size())], fresh});
    return out;
}

} // namespace strtour

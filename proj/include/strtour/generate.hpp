#pragma once

#include "strtour/graph.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace strtour {

/// mt19937_64 with rejection-sampled bounded draws, so sequences are the same
/// on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);
    /// Uniform in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

private:
    std::mt19937_64 engine_;
};

/// Union of random simple cycles, each after the first sharing a vertex with
/// the ones before it. A cycle that would repeat an edge is discarded. m ends
/// within 10% of target_m. Throws InputError on infeasible parameters.
Graph gen_eulerian(std::uint32_t n, std::uint64_t target_m, std::uint64_t seed);

enum class PerturbMode { OddDegree, Disconnected };

PerturbMode parse_perturb_mode(std::string_view text);

/// OddDegree: one pendant edge from a random vertex of positive degree to a
/// new vertex. Disconnected: a triangle on three new vertices.
Graph perturb(const Graph& g, PerturbMode mode, std::uint64_t seed);

} // namespace strtour

#pragma once

#include "strtour/engine.hpp"
#include "strtour/graph.hpp"
#include "strtour/records.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

namespace strtour {

/// Closed trail stored as directed edges; edge k's head is edge k+1's tail.
struct Circuit {
    CircuitId id = 0;
    std::vector<TourStep> edges;

    /// Tails in walk order.
    std::vector<Vertex> vertices() const;
    /// Rotates so the first edge leaves `v`. Returns false if no edge does.
    bool rotate_to(Vertex v);
};

/// Up to n undirected edges held in RAM between circuit extractions.
class EdgeBuffer {
public:
    explicit EdgeBuffer(std::uint32_t n);

    void insert(Vertex u, Vertex v);
    std::size_t size() const { return edges_; }
    bool empty() const { return edges_ == 0; }

    /// Removes and returns a cycle, or nothing if the buffer is acyclic.
    ///
    /// The walk starts at the lowest vertex with positive degree and always
    /// steps to the lowest unused neighbour; dead ends are pruned and the
    /// first closed subwalk is cut out.
    std::optional<Circuit> extract_circuit();

    /// Peak scratch words used by the last extract_circuit call.
    std::uint64_t last_scratch_words() const { return scratch_words_; }

private:
    void erase(Vertex u, Vertex v);

    std::vector<std::set<Vertex>> adj_;
    std::set<Vertex> active_;
    std::size_t edges_ = 0;
    std::uint64_t scratch_words_ = 0;
};

/// Unoriented edge of the connectivity tree, `cvertex` shared by both circuits.
struct TreeEdge {
    CircuitId a = 0;
    CircuitId b = 0;
    Vertex cvertex = 0;

    friend bool operator==(const TreeEdge&, const TreeEdge&) = default;
};

/// Parent-to-child edge after rooting.
struct RootedTreeEdge {
    CircuitId parent = 0;
    CircuitId child = 0;
    std::uint64_t parent_depth = 0;
    Vertex cvertex = 0;

    friend bool operator==(const RootedTreeEdge&, const RootedTreeEdge&) = default;
};

struct Phase1Options {
    /// Relabel components with the O(n) sweep per circuit instead of a
    /// disjoint-set forest over component labels. Same answers.
    bool fidelity_relabel = false;
    /// Check after every circuit that the tree is a forest with one tree per
    /// connected component seen so far.
    bool check_tree = true;
};

struct TreeCheckReport {
    std::uint64_t checks = 0;
    std::uint64_t violations = 0;
};

/// Per-circuit scratch shared by new_test and comp_test.
struct CircuitTestState {
    bool created = false;  // tree vertex exists for this circuit
    CircuitId first_seen_circuit = 0;
    Vertex first_seen_vertex = 0;
    CircuitId component = 0;  // label of the first previously-seen vertex
    std::vector<CircuitId> touched;  // component labels touched, including 0
};

/// In-RAM state of the single phase-1 pass: first-use circuit and component
/// label per vertex, and the connectivity tree over circuits.
class CircuitFinder {
public:
    CircuitFinder(std::uint32_t n, Phase1Options options = {});

    /// Numbers `circuit`, updates the tree and emits it (preceded by a
    /// flag-1 info edge when it gets no tree vertex).
    void accept(Circuit circuit, Emitter& out);

    /// Checks connectivity, roots the tree at circuit 1 and emits one info
    /// edge per tree edge. Throws NotEulerian(Disconnected).
    void finish(Emitter& out);

    /// Steps of accept(), exposed for tests. `circuit.id` must already be set.
    CircuitTestState new_test(const Circuit& circuit);
    void comp_test(const Circuit& circuit, CircuitTestState& state);

    std::uint32_t n() const { return n_; }
    std::uint64_t circuits() const { return cir_; }
    /// Current component label of `v` (0 = unseen).
    CircuitId component_of(Vertex v);
    CircuitId first_circuit_of(Vertex v) const { return pre_[v]; }
    const std::vector<CircuitId>& tree_vertices() const { return tree_vertices_; }
    const std::vector<TreeEdge>& tree_edges() const { return tree_edges_; }
    /// Valid after finish().
    const std::vector<RootedTreeEdge>& rooted_tree() const { return rooted_; }
    std::uint64_t tree_height() const { return tree_height_; }
    const TreeCheckReport& tree_check() const { return check_; }

    std::uint64_t live_words() const;
    std::uint64_t live_records() const { return tree_edges_.size(); }
    /// Peak transient words of the last accept()/finish() call.
    std::uint64_t transient_words() const { return transient_words_; }
    void reset_transient() { transient_words_ = 0; }

private:
    CircuitId find_label(CircuitId label);
    void create_tree_vertex(CircuitId id);
    void add_tree_edge(CircuitId a, CircuitId b, Vertex cvertex);
    void check_tree_invariant();

    std::uint32_t n_;
    Phase1Options options_;
    std::vector<CircuitId> com_;
    std::vector<CircuitId> pre_;
    std::unordered_map<CircuitId, CircuitId> label_parent_;
    CircuitId cir_ = 0;
    std::vector<CircuitId> tree_vertices_;
    std::vector<TreeEdge> tree_edges_;
    std::vector<RootedTreeEdge> rooted_;
    std::uint64_t tree_height_ = 0;
    std::uint64_t transient_words_ = 0;

    // Tree-invariant instrumentation; not part of the metered state.
    std::int64_t graph_components_ = 0;
    std::unordered_map<CircuitId, CircuitId> check_parent_;
    bool check_cycle_seen_ = false;
    TreeCheckReport check_;
};

/// The phase-1 pass processor: buffers up to n edges, cuts circuits out and
/// hands them to a CircuitFinder.
class CircuitFindProcessor final : public PassProcessor {
public:
    CircuitFindProcessor(std::uint32_t n, Phase1Options options = {});

    void on_item(const StreamItem& item, Emitter& out) override;
    void on_end(Emitter& out) override;
    LiveState live_state() const override;

    const CircuitFinder& finder() const { return finder_; }
    CircuitFinder& finder() { return finder_; }

private:
    std::uint64_t steady_words() const;
    void extract_and_accept(Emitter& out);

    EdgeBuffer buffer_;
    CircuitFinder finder_;
    // Largest word count seen at any single moment inside the current item.
    std::uint64_t item_peak_ = 0;
};

struct Phase1Result {
    Stream stream;
    /// Height of the connectivity tree rooted at circuit 1.
    std::uint64_t tree_height = 0;
    std::uint64_t circuits = 0;
    std::vector<RootedTreeEdge> rooted_tree;
    TreeCheckReport tree_check;
};

/// Single streaming pass over graph edges. Throws NotEulerian.
Phase1Result find_circuits(PassEngine& engine, const Stream& input, std::uint32_t n, Phase1Options options = {});

/// Phase 1 with a prescribed decomposition: the circuits are taken in the
/// given order instead of being cut from the buffer. They must cover the
/// input edges exactly (InputError otherwise). Not memory-bounded.
Phase1Result find_circuits_forced(PassEngine& engine, const Stream& input, std::uint32_t n,
                                  std::vector<Circuit> circuits, Phase1Options options = {});

} // namespace strtour

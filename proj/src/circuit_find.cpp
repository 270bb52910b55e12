#include "strtour/circuit_find.hpp"

#include "strtour/errors.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_set>

namespace strtour {

std::vector<Vertex> Circuit::vertices() const {
    std::vector<Vertex> out;
    out.reserve(edges.size());
    for (const auto& e : edges) {
        out.push_back(e.tail);
    }
    return out;
}

bool Circuit::rotate_to(Vertex v) {
    auto it = std::find_if(edges.begin(), edges.end(), [v](const TourStep& e) { return e.tail == v; });
    if (it == edges.end()) {
        return false;
    }
    std::rotate(edges.begin(), it, edges.end());
    return true;
}

// ---------------------------------------------------------------------------

EdgeBuffer::EdgeBuffer(std::uint32_t n) : adj_(std::size_t{n} + 1) {}

void EdgeBuffer::insert(Vertex u, Vertex v) {
    if (u >= adj_.size() || v >= adj_.size() || u == 0 || v == 0 || u == v) {
        throw IntegrityFault("edge {" + std::to_string(u) + "," + std::to_string(v) + "} not valid for buffer");
    }
    if (!adj_[u].insert(v).second) {
        throw IntegrityFault("duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "} in buffer");
    }
    adj_[v].insert(u);
    active_.insert(u);
    active_.insert(v);
    ++edges_;
}

void EdgeBuffer::erase(Vertex u, Vertex v) {
    adj_[u].erase(v);
    adj_[v].erase(u);
    if (adj_[u].empty()) {
        active_.erase(u);
    }
    if (adj_[v].empty()) {
        active_.erase(v);
    }
    --edges_;
}

std::optional<Circuit> EdgeBuffer::extract_circuit() {
    scratch_words_ = 0;
    std::unordered_set<Vertex> pruned;
    std::unordered_map<Vertex, std::size_t> on_path;
    std::vector<Vertex> path;

    auto note_scratch = [&] {
        scratch_words_ = std::max<std::uint64_t>(scratch_words_, path.size() + 2 * on_path.size() + pruned.size());
    };

    for (Vertex start : active_) {
        if (pruned.contains(start)) {
            continue;
        }
        path.assign(1, start);
        on_path.clear();
        on_path.emplace(start, 0);
        while (!path.empty()) {
            const Vertex x = path.back();
            const Vertex prev = path.size() >= 2 ? path[path.size() - 2] : 0;
            Vertex next = 0;
            for (Vertex y : adj_[x]) {
                if (y != prev && !pruned.contains(y)) {
                    next = y;
                    break;
                }
            }
            if (next == 0) {
                // x has no way out but back: it lies on no cycle.
                pruned.insert(x);
                on_path.erase(x);
                path.pop_back();
                note_scratch();
                continue;
            }
            if (auto hit = on_path.find(next); hit != on_path.end()) {
                Circuit c;
                for (std::size_t k = hit->second; k + 1 < path.size(); ++k) {
                    c.edges.push_back({path[k], path[k + 1]});
                }
                c.edges.push_back({x, next});
                note_scratch();
                for (const auto& e : c.edges) {
                    erase(e.tail, e.head);
                }
                return c;
            }
            on_path.emplace(next, path.size());
            path.push_back(next);
            note_scratch();
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

CircuitFinder::CircuitFinder(std::uint32_t n, Phase1Options options)
    : n_(n), options_(options), com_(std::size_t{n} + 1, 0), pre_(std::size_t{n} + 1, 0) {}

CircuitId CircuitFinder::find_label(CircuitId label) {
    if (label == 0 || options_.fidelity_relabel) {
        return label;
    }
    auto root = label;
    while (true) {
        auto parent = label_parent_.at(root);
        if (parent == root) {
            break;
        }
        root = parent;
    }
    while (label != root) {
        auto& parent = label_parent_[label];
        label = parent;
        parent = root;
    }
    return root;
}

CircuitId CircuitFinder::component_of(Vertex v) { return find_label(com_.at(v)); }

void CircuitFinder::create_tree_vertex(CircuitId id) {
    tree_vertices_.push_back(id);
    if (options_.check_tree) {
        check_parent_.emplace(id, id);
    }
}

void CircuitFinder::add_tree_edge(CircuitId a, CircuitId b, Vertex cvertex) {
    tree_edges_.push_back({a, b, cvertex});
    if (!options_.check_tree) {
        return;
    }
    auto find = [this](CircuitId x) {
        while (check_parent_.at(x) != x) {
            x = check_parent_[x] = check_parent_.at(check_parent_.at(x));
        }
        return x;
    };
    auto ra = find(a);
    auto rb = find(b);
    if (ra == rb) {
        check_cycle_seen_ = true;
    } else {
        check_parent_[ra] = rb;
    }
}

void CircuitFinder::check_tree_invariant() {
    if (!options_.check_tree) {
        return;
    }
    ++check_.checks;
    const auto forest_components =
        static_cast<std::int64_t>(tree_vertices_.size()) - static_cast<std::int64_t>(tree_edges_.size());
    if (check_cycle_seen_ || forest_components != graph_components_) {
        ++check_.violations;
    }
    check_cycle_seen_ = false;
}

CircuitTestState CircuitFinder::new_test(const Circuit& circuit) {
    const auto cir = circuit.id;
    CircuitTestState st;
    st.touched.push_back(0);
    for (Vertex v : circuit.vertices()) {
        if (pre_[v] == 0) {
            st.created = true;
            pre_[v] = cir;
        } else if (st.first_seen_circuit == 0) {
            st.first_seen_circuit = pre_[v];
            st.first_seen_vertex = v;
            st.component = find_label(com_[v]);
            st.touched.push_back(st.component);
        }
    }
    if (st.created) {
        create_tree_vertex(cir);
        if (st.first_seen_circuit != 0) {
            add_tree_edge(st.first_seen_circuit, cir, st.first_seen_vertex);
        } else {
            for (Vertex v : circuit.vertices()) {
                com_[v] = cir;
            }
            if (!options_.fidelity_relabel) {
                label_parent_.emplace(cir, cir);
            }
            ++graph_components_;
        }
    }
    return st;
}

void CircuitFinder::comp_test(const Circuit& circuit, CircuitTestState& st) {
    const auto cir = circuit.id;
    const auto target = st.component;
    if (target == 0) {
        return;
    }
    const auto verts = circuit.vertices();
    for (Vertex v : verts) {
        const auto label = find_label(com_[v]);
        if (label == target) {
            continue;
        }
        if (!st.created) {
            st.created = true;
            create_tree_vertex(cir);
            add_tree_edge(st.first_seen_circuit, cir, st.first_seen_vertex);
        }
        if (std::find(st.touched.begin(), st.touched.end(), label) == st.touched.end()) {
            add_tree_edge(pre_[v], cir, v);
            st.touched.push_back(label);
        }
    }

    // Label 0 marks unseen vertices and is never relabeled.
    std::uint64_t merged = 0;
    for (auto label : st.touched) {
        if (label != 0 && label != target) {
            ++merged;
            if (!options_.fidelity_relabel) {
                label_parent_[label] = target;
            }
        }
    }
    if (options_.fidelity_relabel && merged > 0) {
        for (std::uint32_t k = 1; k <= n_; ++k) {
            const auto label = com_[k];
            if (label != 0 && label != target &&
                std::find(st.touched.begin(), st.touched.end(), label) != st.touched.end()) {
                com_[k] = target;
            }
        }
    }
    for (Vertex v : verts) {
        com_[v] = target;
    }
    graph_components_ -= static_cast<std::int64_t>(merged);
}

void CircuitFinder::accept(Circuit circuit, Emitter& out) {
    if (circuit.edges.empty()) {
        throw IntegrityFault("empty circuit");
    }
    for (std::size_t k = 0; k < circuit.edges.size(); ++k) {
        const auto& e = circuit.edges[k];
        if (e.tail == 0 || e.tail > n_ || e.head == 0 || e.head > n_) {
            throw IntegrityFault("circuit edge " + std::to_string(e.tail) + " " + std::to_string(e.head) +
                                 " outside 1.." + std::to_string(n_));
        }
        if (e.head != circuit.edges[(k + 1) % circuit.edges.size()].tail) {
            throw IntegrityFault("circuit does not close up at step " + std::to_string(k + 1));
        }
    }
    circuit.id = ++cir_;
    transient_words_ = std::max<std::uint64_t>(transient_words_, 2 * circuit.edges.size() + 2 * circuit.edges.size());

    auto st = new_test(circuit);
    comp_test(circuit, st);
    check_tree_invariant();

    if (!st.created) {
        out.emit(InfoEdge{st.first_seen_circuit, circuit.id, 0, st.first_seen_vertex, 1});
        if (!circuit.rotate_to(st.first_seen_vertex)) {
            throw IntegrityFault("circuit " + std::to_string(circuit.id) + " misses its shared vertex");
        }
    }
    std::uint64_t position = 0;
    for (const auto& e : circuit.edges) {
        out.emit(GraphEdge{e.tail, e.head, circuit.id, ++position, 0, 0});
    }
}

void CircuitFinder::finish(Emitter& out) {
    CircuitId label = 0;
    for (std::uint32_t v = 1; v <= n_; ++v) {
        if (pre_[v] == 0) {
            continue;
        }
        const auto c = find_label(com_[v]);
        if (label == 0) {
            label = c;
        } else if (c != label) {
            throw NotEulerian(NotEulerianReason::Disconnected);
        }
    }

    rooted_.clear();
    tree_height_ = 0;
    if (tree_edges_.empty()) {
        return;
    }

    std::unordered_map<CircuitId, std::vector<CircuitId>> adjacency;
    for (const auto& e : tree_edges_) {
        adjacency[e.a].push_back(e.b);
        adjacency[e.b].push_back(e.a);
    }
    std::unordered_map<CircuitId, std::uint64_t> depth;
    std::deque<CircuitId> queue{1};
    depth.emplace(1, 0);
    while (!queue.empty()) {
        auto w = queue.front();
        queue.pop_front();
        for (auto x : adjacency[w]) {
            if (depth.emplace(x, depth[w] + 1).second) {
                tree_height_ = std::max(tree_height_, depth[w] + 1);
                queue.push_back(x);
            }
        }
    }
    transient_words_ = std::max<std::uint64_t>(transient_words_, 4 * tree_edges_.size() + 2 * depth.size());
    if (depth.size() != tree_vertices_.size()) {
        throw IntegrityFault("connectivity tree is not connected: reached " + std::to_string(depth.size()) + " of " +
                             std::to_string(tree_vertices_.size()) + " vertices");
    }

    rooted_.reserve(tree_edges_.size());
    for (const auto& e : tree_edges_) {
        const auto da = depth.at(e.a);
        const auto db = depth.at(e.b);
        RootedTreeEdge r = da < db ? RootedTreeEdge{e.a, e.b, da, e.cvertex} : RootedTreeEdge{e.b, e.a, db, e.cvertex};
        rooted_.push_back(r);
        out.emit(InfoEdge{r.parent, r.child, r.parent_depth, r.cvertex, 0});
    }
}

std::uint64_t CircuitFinder::live_words() const {
    // com, pre, label forest, tree edges (a, b, cvertex) and a handful of scalars.
    return 2 * std::uint64_t{n_} + 2 * label_parent_.size() + 3 * tree_edges_.size() + 8;
}

// ---------------------------------------------------------------------------

CircuitFindProcessor::CircuitFindProcessor(std::uint32_t n, Phase1Options options)
    : buffer_(n), finder_(n, options) {}

void CircuitFindProcessor::on_item(const StreamItem& item, Emitter& out) {
    const auto* e = std::get_if<GraphEdge>(&item);
    if (e == nullptr) {
        throw IntegrityFault("phase-1 input must hold graph edges only");
    }
    item_peak_ = 0;
    buffer_.insert(e->tail, e->head);
    if (buffer_.size() >= finder_.n()) {
        extract_and_accept(out);
    }
}

void CircuitFindProcessor::on_end(Emitter& out) {
    item_peak_ = 0;
    while (!buffer_.empty()) {
        extract_and_accept(out);
    }
    finder_.reset_transient();
    finder_.finish(out);
    item_peak_ = std::max(item_peak_, steady_words() + finder_.transient_words());
}

// The search scratch lives while the buffer is still full; the circuit copy
// and test scratch live after its edges have left the buffer.
void CircuitFindProcessor::extract_and_accept(Emitter& out) {
    const auto full = steady_words();
    auto c = buffer_.extract_circuit();
    item_peak_ = std::max(item_peak_, full + buffer_.last_scratch_words());
    if (!c) {
        if (buffer_.size() >= finder_.n()) {
            throw IntegrityFault("full buffer without a cycle");
        }
        throw NotEulerian(NotEulerianReason::OddDegree);
    }
    finder_.reset_transient();
    finder_.accept(std::move(*c), out);
    item_peak_ = std::max(item_peak_, steady_words() + finder_.transient_words());
}

std::uint64_t CircuitFindProcessor::steady_words() const { return finder_.live_words() + 2 * buffer_.size(); }

LiveState CircuitFindProcessor::live_state() const {
    LiveState s;
    s.records = buffer_.size() + finder_.live_records();
    s.words = std::max(item_peak_, steady_words());
    return s;
}

Phase1Result find_circuits(PassEngine& engine, const Stream& input, std::uint32_t n, Phase1Options options) {
    CircuitFindProcessor proc(n, options);
    Phase1Result r;
    r.stream = engine.stream_pass(proc, input, "circuit_find");
    const auto& f = proc.finder();
    r.tree_height = f.tree_height();
    r.circuits = f.circuits();
    r.rooted_tree = f.rooted_tree();
    r.tree_check = f.tree_check();
    engine.stats().circuits_found += f.circuits();
    return r;
}

namespace {

std::uint64_t pair_key(Vertex a, Vertex b) {
    if (a > b) {
        std::swap(a, b);
    }
    return (std::uint64_t{a} << 32) | b;
}

// Reads the edges, then hands the given circuits to the finder in order.
class ForcedOrderProcessor final : public PassProcessor {
public:
    ForcedOrderProcessor(std::uint32_t n, std::vector<Circuit> circuits, Phase1Options options)
        : finder_(n, options), circuits_(std::move(circuits)) {}

    void on_item(const StreamItem& item, Emitter&) override {
        const auto* e = std::get_if<GraphEdge>(&item);
        if (e == nullptr) {
            throw IntegrityFault("phase-1 input must hold graph edges only");
        }
        ++edges_[pair_key(e->tail, e->head)];
    }

    void on_end(Emitter& out) override {
        for (const auto& c : circuits_) {
            for (const auto& s : c.edges) {
                auto it = edges_.find(pair_key(s.tail, s.head));
                if (it == edges_.end() || it->second == 0) {
                    throw InputError("forced circuit uses edge " + std::to_string(s.tail) + " " +
                                     std::to_string(s.head) + " not left in the input");
                }
                --it->second;
            }
        }
        for (const auto& [key, count] : edges_) {
            if (count != 0) {
                throw InputError("forced circuits leave input edges uncovered");
            }
        }
        for (auto& c : circuits_) {
            finder_.accept(std::move(c), out);
        }
        finder_.finish(out);
    }

    LiveState live_state() const override {
        return {finder_.live_records(), finder_.live_words() + finder_.transient_words()};
    }

    const CircuitFinder& finder() const { return finder_; }

private:
    CircuitFinder finder_;
    std::vector<Circuit> circuits_;
    std::unordered_map<std::uint64_t, std::uint64_t> edges_;
};

} // namespace

Phase1Result find_circuits_forced(PassEngine& engine, const Stream& input, std::uint32_t n,
                                  std::vector<Circuit> circuits, Phase1Options options) {
    ForcedOrderProcessor proc(n, std::move(circuits), options);
    Phase1Result r;
    r.stream = engine.stream_pass(proc, input, "circuit_find_forced");
    const auto& f = proc.finder();
    r.tree_height = f.tree_height();
    r.circuits = f.circuits();
    r.rooted_tree = f.rooted_tree();
    r.tree_check = f.tree_check();
    engine.stats().circuits_found += f.circuits();
    return r;
}

} // namespace strtour

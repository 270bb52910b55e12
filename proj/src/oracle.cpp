#include "strtour/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace strtour {

namespace {

std::uint64_t pair_key(Vertex a, Vertex b) {
    if (a > b) {
        std::swap(a, b);
    }
    return (std::uint64_t{a} << 32) | b;
}

std::string step_text(const TourStep& s) { return std::to_string(s.tail) + " " + std::to_string(s.head); }

} // namespace

AdjacencyGraph::AdjacencyGraph(const Graph& g) : n(g.n), m(g.m()), adjacency(std::size_t{g.n} + 1) {
    std::uint64_t id = 0;
    for (const auto& e : g.edges) {
        ++id;
        adjacency.at(e.u).push_back({e.v, id});
        adjacency.at(e.v).push_back({e.u, id});
    }
    for (auto& list : adjacency) {
        std::sort(list.begin(), list.end());
    }
}

std::string EulerVerdict::to_string() const {
    if (eulerian) {
        return "eulerian: yes";
    }
    return "not eulerian: " + std::string(strtour::to_string(reason));
}

EulerVerdict is_eulerian(const AdjacencyGraph& g) {
    Vertex start = 0;
    for (Vertex v = 1; v <= g.n; ++v) {
        if (g.degree(v) % 2 != 0) {
            return {false, NotEulerianReason::OddDegree};
        }
        if (start == 0 && g.degree(v) > 0) {
            start = v;
        }
    }
    if (start == 0) {
        return {};
    }
    std::vector<char> seen(std::size_t{g.n} + 1, 0);
    std::vector<Vertex> todo{start};
    seen[start] = 1;
    while (!todo.empty()) {
        auto v = todo.back();
        todo.pop_back();
        for (auto [w, id] : g.adjacency[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                todo.push_back(w);
            }
        }
    }
    for (Vertex v = 1; v <= g.n; ++v) {
        if (g.degree(v) > 0 && !seen[v]) {
            return {false, NotEulerianReason::Disconnected};
        }
    }
    return {};
}

EulerVerdict is_eulerian(const Graph& g) { return is_eulerian(AdjacencyGraph(g)); }

std::optional<Tour> hierholzer(const Graph& g) {
    const AdjacencyGraph adj(g);
    if (!is_eulerian(adj)) {
        return std::nullopt;
    }
    Tour tour;
    if (adj.m == 0) {
        return tour;
    }
    Vertex start = 1;
    while (adj.degree(start) == 0) {
        ++start;
    }
    std::vector<char> used(adj.m + 1, 0);
    std::vector<std::size_t> next(std::size_t{adj.n} + 1, 0);
    std::vector<Vertex> stack{start};
    std::vector<Vertex> circuit;
    circuit.reserve(adj.m + 1);
    while (!stack.empty()) {
        const auto v = stack.back();
        auto& i = next[v];
        const auto& list = adj.adjacency[v];
        while (i < list.size() && used[list[i].second]) {
            ++i;
        }
        if (i == list.size()) {
            circuit.push_back(v);
            stack.pop_back();
        } else {
            used[list[i].second] = 1;
            stack.push_back(list[i].first);
        }
    }
    std::reverse(circuit.begin(), circuit.end());
    tour.reserve(adj.m);
    for (std::size_t k = 0; k + 1 < circuit.size(); ++k) {
        tour.push_back({circuit[k], circuit[k + 1]});
    }
    return tour;
}

void check_forest(const CircuitForest& forest) {
    std::unordered_map<CircuitId, const Circuit*> by_id;
    for (const auto& c : forest.circuits) {
        if (c.edges.empty()) {
            throw IntegrityFault("circuit " + std::to_string(c.id) + " is empty");
        }
        if (!by_id.emplace(c.id, &c).second) {
            throw IntegrityFault("circuit " + std::to_string(c.id) + " appears twice");
        }
        for (std::size_t k = 0; k < c.edges.size(); ++k) {
            const auto& next = c.edges[(k + 1) % c.edges.size()];
            if (c.edges[k].head != next.tail) {
                throw IntegrityFault("circuit " + std::to_string(c.id) + " breaks at position " +
                                     std::to_string(k + 1));
            }
        }
    }
    if (forest.circuits.empty()) {
        if (!forest.tree.empty()) {
            throw IntegrityFault("tree edges without circuits");
        }
        return;
    }
    std::unordered_map<CircuitId, CircuitId> parent;
    for (const auto& e : forest.tree) {
        const auto p = by_id.find(e.parent);
        const auto c = by_id.find(e.child);
        if (p == by_id.end() || c == by_id.end()) {
            throw IntegrityFault("tree edge " + std::to_string(e.parent) + " -> " + std::to_string(e.child) +
                                 " names a missing circuit");
        }
        if (!parent.emplace(e.child, e.parent).second) {
            throw IntegrityFault("circuit " + std::to_string(e.child) + " has two parents");
        }
        if (c->second->edges.front().tail != e.cvertex) {
            throw IntegrityFault("circuit " + std::to_string(e.child) + " does not start at shared vertex " +
                                 std::to_string(e.cvertex));
        }
        const auto& pe = p->second->edges;
        if (std::none_of(pe.begin(), pe.end(), [&](const TourStep& s) { return s.tail == e.cvertex; })) {
            throw IntegrityFault("circuit " + std::to_string(e.parent) + " misses shared vertex " +
                                 std::to_string(e.cvertex));
        }
    }
    if (parent.size() + 1 != forest.circuits.size()) {
        throw IntegrityFault("tree over " + std::to_string(forest.circuits.size()) + " circuits has " +
                             std::to_string(parent.size()) + " parent edges");
    }
    // Every chain of parents must end at the root without repeating.
    std::unordered_map<CircuitId, int> state;  // 1 = on path, 2 = reaches root
    for (const auto& c : forest.circuits) {
        std::vector<CircuitId> path;
        auto x = c.id;
        while (state[x] == 0) {
            state[x] = 1;
            path.push_back(x);
            auto it = parent.find(x);
            if (it == parent.end()) {
                break;
            }
            x = it->second;
        }
        if (state[x] == 1 && parent.count(x) != 0) {
            throw IntegrityFault("tree has a cycle through circuit " + std::to_string(x));
        }
        for (auto y : path) {
            state[y] = 2;
        }
    }
}

Tour euler_tree_reference(const CircuitForest& forest) {
    check_forest(forest);
    Tour tour;
    if (forest.circuits.empty()) {
        return tour;
    }
    std::unordered_map<CircuitId, const Circuit*> by_id;
    std::unordered_set<CircuitId> children;
    std::unordered_map<CircuitId, std::map<Vertex, std::vector<CircuitId>>> kids;
    for (const auto& c : forest.circuits) {
        by_id[c.id] = &c;
    }
    for (const auto& e : forest.tree) {
        children.insert(e.child);
        kids[e.parent][e.cvertex].push_back(e.child);
    }
    for (auto& [p, at] : kids) {
        for (auto& [v, list] : at) {
            std::sort(list.begin(), list.end());
        }
    }
    CircuitId root = 0;
    for (const auto& c : forest.circuits) {
        if (children.count(c.id) == 0) {
            root = c.id;
            break;
        }
    }

    struct Frame {
        CircuitId id;
        std::size_t pos;
        std::size_t kid;  // children at the current vertex already entered
    };
    std::vector<Frame> stack{{root, 0, 0}};
    while (!stack.empty()) {
        auto& f = stack.back();
        const auto& edges = by_id.at(f.id)->edges;
        if (f.pos == edges.size()) {
            stack.pop_back();
            continue;
        }
        const auto v = edges[f.pos].tail;
        const std::vector<CircuitId>* here = nullptr;
        if (auto it = kids.find(f.id); it != kids.end()) {
            if (auto jt = it->second.find(v); jt != it->second.end()) {
                here = &jt->second;
            }
        }
        if (here != nullptr && f.kid < here->size()) {
            const auto child = (*here)[f.kid++];
            stack.push_back({child, 0, 0});
            continue;
        }
        // Children at v are entered only at its first occurrence.
        if (here != nullptr) {
            kids[f.id].erase(v);
        }
        tour.push_back(edges[f.pos]);
        ++f.pos;
        f.kid = 0;
    }
    return tour;
}

CircuitForest forest_from_items(const std::vector<StreamItem>& items) {
    std::map<CircuitId, std::vector<std::pair<std::uint64_t, TourStep>>> edges;
    CircuitForest forest;
    for (const auto& item : items) {
        if (const auto* g = std::get_if<GraphEdge>(&item)) {
            edges[g->circuit].push_back({g->position, {g->tail, g->head}});
        } else {
            const auto& e = std::get<InfoEdge>(item);
            forest.tree.push_back({e.pred, e.succ, e.cvertex});
        }
    }
    std::unordered_map<CircuitId, std::size_t> index;
    for (auto& [id, list] : edges) {
        std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        Circuit c;
        c.id = id;
        for (std::size_t k = 0; k < list.size(); ++k) {
            if (list[k].first != k + 1) {
                throw IntegrityFault("circuit " + std::to_string(id) + " positions not 1..l");
            }
            c.edges.push_back(list[k].second);
        }
        index[id] = forest.circuits.size();
        forest.circuits.push_back(std::move(c));
    }
    for (const auto& e : forest.tree) {
        auto it = index.find(e.child);
        if (it == index.end()) {
            throw IntegrityFault("info edge for missing circuit " + std::to_string(e.child));
        }
        if (!forest.circuits[it->second].rotate_to(e.cvertex)) {
            throw IntegrityFault("circuit " + std::to_string(e.child) + " misses shared vertex " +
                                 std::to_string(e.cvertex));
        }
    }
    return forest;
}

CircuitForest forest_from_stream(const Stream& phase1_output) { return forest_from_items(read_stream(phase1_output)); }

const char* to_string(TourRule rule) {
    switch (rule) {
    case TourRule::Coverage:
        return "coverage";
    case TourRule::Chaining:
        return "chaining";
    case TourRule::Closure:
        return "closure";
    }
    return "?";
}

std::string TourCheck::message() const {
    if (ok) {
        return "tour ok";
    }
    return std::string("tour violates ") + to_string(rule) + " at step " + std::to_string(index) +
           (detail.empty() ? "" : ": " + detail);
}

TourCheck validate_tour(const Graph& g, const Tour& tour) {
    auto fail = [](std::size_t index, TourRule rule, std::string detail) {
        TourCheck c;
        c.ok = false;
        c.index = index;
        c.rule = rule;
        c.detail = std::move(detail);
        return c;
    };

    std::unordered_map<std::uint64_t, int> remaining;
    remaining.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        ++remaining[pair_key(e.u, e.v)];
    }
    for (std::size_t i = 0; i < tour.size(); ++i) {
        auto it = remaining.find(pair_key(tour[i].tail, tour[i].head));
        if (it == remaining.end()) {
            return fail(i, TourRule::Coverage, step_text(tour[i]) + " is not an edge");
        }
        if (it->second == 0) {
            return fail(i, TourRule::Coverage, step_text(tour[i]) + " used twice");
        }
        --it->second;
    }
    if (tour.size() != g.edges.size()) {
        return fail(tour.size(), TourRule::Coverage,
                    std::to_string(g.edges.size() - tour.size()) + " edges missing");
    }
    for (std::size_t i = 0; i + 1 < tour.size(); ++i) {
        if (tour[i].head != tour[i + 1].tail) {
            return fail(i, TourRule::Chaining, step_text(tour[i]) + " then " + step_text(tour[i + 1]));
        }
    }
    if (!tour.empty() && tour.back().head != tour.front().tail) {
        return fail(tour.size() - 1, TourRule::Closure, "ends at " + std::to_string(tour.back().head));
    }
    return {};
}

} // namespace strtour

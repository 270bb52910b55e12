#include "strtour/tree_prep.hpp"

#include "strtour/errors.hpp"
#include "strtour/tree_merge.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace strtour {

namespace {

std::string circuit_name(std::uint64_t id) { return "circuit " + std::to_string(id); }

// Finds the pivot (lowest position whose tail is the shared vertex) and parks
// length and pivot in the last two fields of the circuit's first edge.
class AnnotatePivot final : public PassProcessor {
public:
    void on_item(const StreamItem& item, Emitter& out) override {
        if (const auto* e = std::get_if<InfoEdge>(&item)) {
            flush(out);
            require_no_orphan();
            if (e->mark == 0) {
                pending_ = *e;
            } else {
                out.emit(*e);
            }
            return;
        }
        const auto& g = std::get<GraphEdge>(item);
        if (g.circuit != current_ || !started_) {
            flush(out);
            started_ = true;
            current_ = g.circuit;
            length_ = 0;
            if (pending_) {
                if (pending_->succ != g.circuit) {
                    throw IntegrityFault("info edge for " + circuit_name(pending_->succ) + " has no graph edges");
                }
                first_ = g;
                pivot_ = 0;
            }
        }
        ++length_;
        if (g.position != length_) {
            throw IntegrityFault(circuit_name(g.circuit) + " positions not 1..l at " + std::to_string(g.position));
        }
        if (!first_) {
            out.emit(g);
            return;
        }
        if (pivot_ == 0 && g.tail == pending_->cvertex) {
            pivot_ = g.position;
        }
        if (g.position != 1) {
            out.emit(g);
        }
    }

    void on_end(Emitter& out) override {
        flush(out);
        require_no_orphan();
    }

    LiveState live_state() const override {
        LiveState s;
        s.records = (pending_ ? 1 : 0) + (first_ ? 1 : 0);
        s.words = (pending_ ? kInfoEdgeWords : 0) + (first_ ? kGraphEdgeWords : 0) + 3;
        return s;
    }

private:
    void flush(Emitter& out) {
        if (first_) {
            if (pivot_ == 0) {
                throw IntegrityFault("no edge of " + circuit_name(first_->circuit) + " leaves shared vertex " +
                                     std::to_string(pending_->cvertex));
            }
            first_->aux1 = length_;
            first_->aux2 = pivot_;
            out.emit(*first_);
            out.emit(*pending_);
            first_.reset();
            pending_.reset();
        }
    }

    void require_no_orphan() const {
        if (pending_) {
            throw IntegrityFault("info edge for " + circuit_name(pending_->succ) + " has no graph edges");
        }
    }

    std::optional<InfoEdge> pending_;
    std::optional<GraphEdge> first_;
    bool started_ = false;
    std::uint64_t current_ = 0;
    std::uint64_t length_ = 0;
    std::uint64_t pivot_ = 0;
};

// Applies k -> ((k - p) mod l) + 1 to annotated circuits. Optionally swaps
// flag-1 info edges to (succ, pred, 0, v, 1), the depth request.
class ApplyRotation final : public PassProcessor {
public:
    explicit ApplyRotation(bool request_depths) : request_depths_(request_depths) {}

    void on_item(const StreamItem& item, Emitter& out) override {
        if (const auto* e = std::get_if<InfoEdge>(&item)) {
            if (request_depths_ && e->mark == 1) {
                out.emit(InfoEdge{e->succ, e->pred, e->depth, e->cvertex, 1});
            } else {
                out.emit(*e);
            }
            return;
        }
        auto g = std::get<GraphEdge>(item);
        if (!started_ || g.circuit != current_) {
            started_ = true;
            current_ = g.circuit;
            length_ = 0;
            pivot_ = 0;
            if (g.position == 1 && g.aux1 != 0) {
                length_ = g.aux1;
                pivot_ = g.aux2;
                if (pivot_ < 1 || pivot_ > length_) {
                    throw IntegrityFault("bad rotation annotation on " + circuit_name(g.circuit));
                }
            }
        }
        if (length_ != 0) {
            if (g.position > length_) {
                throw IntegrityFault(circuit_name(g.circuit) + " longer than annotated");
            }
            g.position = (g.position + length_ - pivot_) % length_ + 1;
            g.aux1 = 0;
            g.aux2 = 0;
        }
        out.emit(g);
    }

    LiveState live_state() const override { return {0, 4}; }

private:
    bool request_depths_;
    bool started_ = false;
    std::uint64_t current_ = 0;
    std::uint64_t length_ = 0;
    std::uint64_t pivot_ = 0;
};

class RequestDepths final : public PassProcessor {
public:
    void on_item(const StreamItem& item, Emitter& out) override {
        const auto* e = std::get_if<InfoEdge>(&item);
        if (e != nullptr && e->mark == 1) {
            out.emit(InfoEdge{e->succ, e->pred, e->depth, e->cvertex, 1});
        } else {
            out.emit(item);
        }
    }
    LiveState live_state() const override { return {0, 0}; }
};

// Input: info edges grouped by succ with the flag-0 parent edge first, then
// the swapped depth requests (j, i, 0, v, 1).
class FillDepths final : public PassProcessor {
public:
    explicit FillDepths(bool arm) : arm_(arm) {}

    void on_item(const StreamItem& item, Emitter& out) override {
        const auto* e = std::get_if<InfoEdge>(&item);
        if (e == nullptr) {
            out.emit(item);
            return;
        }
        if (e->mark == 0) {
            if (have_parent_ && parent_of_ == e->succ) {
                throw IntegrityFault("multiple parent edges for " + circuit_name(e->succ));
            }
            have_parent_ = true;
            parent_of_ = e->succ;
            parent_depth_ = e->depth;
            put(*e, out);
            return;
        }
        // Request (j, i, 0, v, 1): i is the predecessor circuit.
        const auto pred = e->succ;
        const auto depth = (have_parent_ && parent_of_ == pred) ? parent_depth_ + 1 : 0;
        put(InfoEdge{pred, e->pred, depth, e->cvertex, 0}, out);
    }

    LiveState live_state() const override { return {0, 5}; }

    std::uint64_t info_edges() const { return info_edges_; }
    std::uint64_t height() const { return height_; }

private:
    void put(const InfoEdge& e, Emitter& out) {
        ++info_edges_;
        height_ = std::max(height_, e.depth + 1);
        out.emit(arm_ ? armed(e) : e);
    }

    bool arm_;
    bool have_parent_ = false;
    std::uint64_t parent_of_ = 0;
    std::uint64_t parent_depth_ = 0;
    std::uint64_t info_edges_ = 0;
    std::uint64_t height_ = 0;
};

SortOrder depth_order() {
    return {"info by (succ, mark), then graph edges", [](const StreamItem& item) {
                if (const auto* e = std::get_if<InfoEdge>(&item)) {
                    return totalized_key({0, e->succ, e->mark, e->pred}, item);
                }
                const auto& g = std::get<GraphEdge>(item);
                return totalized_key({1, g.circuit, g.position, 0}, item);
            }};
}

} // namespace

SortOrder circuit_order() {
    return {"info before its successor circuit, graph by (circuit, position)", [](const StreamItem& item) {
                if (const auto* e = std::get_if<InfoEdge>(&item)) {
                    return totalized_key({e->succ, 0, 0}, item);
                }
                const auto& g = std::get<GraphEdge>(item);
                return totalized_key({g.circuit, 1, g.position}, item);
            }};
}

Stream rotate_member_circuits(PassEngine& engine, const Stream& input) {
    const auto order = circuit_order();
    auto sorted = engine.sort_pass(order, input, "rotate_sort1");
    AnnotatePivot annotate;
    auto annotated = engine.stream_pass(annotate, sorted, "rotate_annotate");
    auto resorted = engine.sort_pass(order, annotated, "rotate_sort2");
    ApplyRotation apply(false);
    return engine.stream_pass(apply, resorted, "rotate_apply");
}

Stream complete_depths(PassEngine& engine, const Stream& input) {
    RequestDepths request;
    auto requested = engine.stream_pass(request, input, "depth_request");
    auto sorted = engine.sort_pass(depth_order(), requested, "depth_sort");
    FillDepths fill(false);
    return engine.stream_pass(fill, sorted, "depth_fill");
}

ArmedStream prepare_tree(PassEngine& engine, const Stream& phase1_output) {
    const auto order = circuit_order();
    auto sorted = engine.sort_pass(order, phase1_output, "rotate_sort1");
    AnnotatePivot annotate;
    auto annotated = engine.stream_pass(annotate, sorted, "rotate_annotate");
    auto resorted = engine.sort_pass(order, annotated, "rotate_sort2");
    ApplyRotation apply(true);
    auto rotated = engine.stream_pass(apply, resorted, "rotate_apply_depth_request");
    auto by_succ = engine.sort_pass(depth_order(), rotated, "depth_sort");
    FillDepths fill(true);
    ArmedStream out;
    out.stream = engine.stream_pass(fill, by_succ, "depth_fill_arm");
    out.info_edges = fill.info_edges();
    out.height = fill.height();
    return out;
}

} // namespace strtour

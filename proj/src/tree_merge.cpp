#include "strtour/tree_merge.hpp"

#include "strtour/errors.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <string>

namespace strtour {

InfoEdge armed(const InfoEdge& e) {
    if (e.depth % 2 == 1) {
        return InfoEdge{e.succ, e.pred, e.depth, e.cvertex, 1};
    }
    return e;
}

std::uint64_t merge_iteration_bound(std::uint64_t height) { return std::bit_width(height); }

namespace {

std::string circuit_name(std::uint64_t id) { return "circuit " + std::to_string(id); }

bool even(std::uint64_t d) { return d % 2 == 0; }

class MarkOddDepth final : public PassProcessor {
public:
    void on_item(const StreamItem& item, Emitter& out) override {
        if (const auto* e = std::get_if<InfoEdge>(&item)) {
            if (e->mark != 0) {
                throw IntegrityFault("info edge for " + circuit_name(e->succ) + " still carries a flag");
            }
            ++info_edges_;
            height_ = std::max(height_, e->depth + 1);
            out.emit(armed(*e));
        } else {
            out.emit(item);
        }
    }
    LiveState live_state() const override { return {0, 2}; }

    std::uint64_t info_edges_ = 0;
    std::uint64_t height_ = 0;
};

// Odd-depth edges (b, a, d, v, 1) follow a's parent edge (k, a, d-1, v', 0);
// they are re-pointed at the grandparent: (k, b, d, v, 0).
class RewireToGrandparent final : public PassProcessor {
public:
    void on_item(const StreamItem& item, Emitter& out) override {
        const auto* e = std::get_if<InfoEdge>(&item);
        if (e == nullptr) {
            out.emit(item);
            return;
        }
        if (e->mark == 0) {
            if (!even(e->depth)) {
                throw IntegrityFault("unmarked info edge with odd depth for " + circuit_name(e->succ));
            }
            have_ = true;
            child_ = e->succ;
            grandparent_ = e->pred;
            out.emit(*e);
            return;
        }
        if (!have_ || child_ != e->succ) {
            throw IntegrityFault("no parent edge for odd-depth " + circuit_name(e->succ));
        }
        out.emit(InfoEdge{grandparent_, e->pred, e->depth, e->cvertex, 0});
    }
    LiveState live_state() const override { return {0, 3}; }

private:
    bool have_ = false;
    std::uint64_t child_ = 0;
    std::uint64_t grandparent_ = 0;
};

// Host graph edges arrive by (circuit, head, position) with each merge
// instruction right after the last host edge whose head is <= its cvertex.
class AssignSlots final : public PassProcessor {
public:
    void on_item(const StreamItem& item, Emitter& out) override {
        if (const auto* g = std::get_if<GraphEdge>(&item)) {
            last_ = *g;
            out.emit(item);
            return;
        }
        const auto& e = std::get<InfoEdge>(item);
        if (!even(e.depth)) {
            out.emit(item);
            return;
        }
        if (!last_ || last_->circuit != e.pred || last_->head != e.cvertex) {
            throw IntegrityFault("no edge of " + circuit_name(e.pred) + " ends at shared vertex " +
                                 std::to_string(e.cvertex));
        }
        out.emit(InfoEdge{e.pred, e.succ, e.depth, e.cvertex, last_->position});
    }
    LiveState live_state() const override {
        return {last_ ? 1u : 0u, last_ ? kGraphEdgeWords : 0};
    }

private:
    std::optional<GraphEdge> last_;
};

// Each merge instruction precedes its child circuit; the child's edges are
// rewritten to (tail, head, host, slot, child, position).
class RelabelChildren final : public PassProcessor {
public:
    void on_item(const StreamItem& item, Emitter& out) override {
        if (const auto* e = std::get_if<InfoEdge>(&item)) {
            close();
            if (even(e->depth)) {
                instruction_ = *e;
                consumed_ = 0;
            } else {
                out.emit(item);
            }
            return;
        }
        const auto& g = std::get<GraphEdge>(item);
        if (instruction_ && g.circuit == instruction_->succ) {
            ++consumed_;
            out.emit(GraphEdge{g.tail, g.head, instruction_->pred, instruction_->mark, g.circuit, g.position});
            return;
        }
        close();
        out.emit(item);
    }
    void on_end(Emitter&) override { close(); }
    LiveState live_state() const override {
        return {instruction_ ? 1u : 0u, (instruction_ ? kInfoEdgeWords : 0) + 1};
    }

private:
    void close() {
        if (instruction_ && consumed_ == 0) {
            throw IntegrityFault("merge instruction for missing " + circuit_name(instruction_->succ));
        }
        instruction_.reset();
    }

    std::optional<InfoEdge> instruction_;
    std::uint64_t consumed_ = 0;
};

// Graph edges arrive by (host, slot, child, child position). Renumbers each
// merged circuit 1..L, halves the surviving depths and marks odd ones for the
// next iteration.
class RenumberAndHalve final : public PassProcessor {
public:
    void on_item(const StreamItem& item, Emitter& out) override {
        if (const auto* e = std::get_if<InfoEdge>(&item)) {
            if (even(e->depth) || e->mark != 0) {
                throw IntegrityFault("unconsumed merge instruction for " + circuit_name(e->succ));
            }
            const InfoEdge halved{e->pred, e->succ, (e->depth - 1) / 2, e->cvertex, 0};
            ++info_edges_;
            height_ = std::max(height_, halved.depth + 1);
            out.emit(armed(halved));
            return;
        }
        const auto& g = std::get<GraphEdge>(item);
        if (!started_ || g.circuit != current_) {
            if (g.aux1 != 0 || g.aux2 != 0) {
                throw IntegrityFault("merged " + circuit_name(g.circuit) + " does not start with a host edge");
            }
            started_ = true;
            current_ = g.circuit;
            count_ = 0;
        }
        out.emit(GraphEdge{g.tail, g.head, g.circuit, ++count_, 0, 0});
    }
    LiveState live_state() const override { return {0, 4}; }

    std::uint64_t info_edges_ = 0;
    std::uint64_t height_ = 0;

private:
    bool started_ = false;
    std::uint64_t current_ = 0;
    std::uint64_t count_ = 0;
};

SortOrder rewire_order() {
    return {"info by (succ, mark, pred) before graph edges", [](const StreamItem& item) {
                if (const auto* e = std::get_if<InfoEdge>(&item)) {
                    return totalized_key({0, e->succ, e->mark, e->pred}, item);
                }
                const auto& g = std::get<GraphEdge>(item);
                return totalized_key({1, g.circuit, g.position, 0}, item);
            }};
}

// Graph edges by (circuit, head, position); an even-depth instruction sorts
// after every host edge with head <= cvertex; odd-depth edges go last.
SortOrder slot_order() {
    return {"host edges by head with instructions at their cvertex", [](const StreamItem& item) {
                if (const auto* e = std::get_if<InfoEdge>(&item)) {
                    if (!even(e->depth)) {
                        return totalized_key({1, 0, 0, 0, 0}, item);
                    }
                    return totalized_key({0, e->pred, e->cvertex, 1, e->succ}, item);
                }
                const auto& g = std::get<GraphEdge>(item);
                return totalized_key({0, g.circuit, g.head, 0, g.position}, item);
            }};
}

SortOrder child_order() {
    return {"info before its successor circuit", [](const StreamItem& item) {
                if (const auto* e = std::get_if<InfoEdge>(&item)) {
                    return totalized_key({e->succ, 0, 0}, item);
                }
                const auto& g = std::get<GraphEdge>(item);
                return totalized_key({g.circuit, 1, g.position}, item);
            }};
}

SortOrder splice_order() {
    return {"info first, graph by the four last labels", [](const StreamItem& item) {
                if (const auto* e = std::get_if<InfoEdge>(&item)) {
                    return totalized_key({0, e->pred, e->succ, 0, 0}, item);
                }
                const auto& g = std::get<GraphEdge>(item);
                return totalized_key({1, g.circuit, g.position, g.aux1, g.aux2}, item);
            }};
}

} // namespace

ArmedStream mark_odd_depth_edges(PassEngine& engine, const Stream& input) {
    MarkOddDepth mark;
    ArmedStream out;
    out.stream = engine.stream_pass(mark, input, "mark_odd_depth");
    out.info_edges = mark.info_edges_;
    out.height = mark.height_;
    return out;
}

MergeStep merge_iteration(PassEngine& engine, const ArmedStream& input, std::uint64_t iteration) {
    const auto first_pass = engine.passes().size();

    auto s1 = engine.sort_pass(rewire_order(), input.stream, "merge_sort_rewire");
    RewireToGrandparent rewire;
    auto s2 = engine.stream_pass(rewire, s1, "merge_rewire");
    auto s3 = engine.sort_pass(slot_order(), s2, "merge_sort_slot");
    AssignSlots slots;
    auto s4 = engine.stream_pass(slots, s3, "merge_slot");
    auto s5 = engine.sort_pass(child_order(), s4, "merge_sort_child");
    RelabelChildren relabel;
    auto s6 = engine.stream_pass(relabel, s5, "merge_relabel");
    auto s7 = engine.sort_pass(splice_order(), s6, "merge_sort_splice");
    RenumberAndHalve renumber;
    auto s8 = engine.stream_pass(renumber, s7, "merge_renumber");

    MergeStep step;
    step.output.stream = s8;
    step.output.info_edges = renumber.info_edges_;
    step.output.height = renumber.height_;

    auto& r = step.report;
    r.iteration = iteration;
    r.circuits_before = input.info_edges + 1;
    r.circuits_after = renumber.info_edges_ + 1;
    r.height_before = input.height;
    r.height_after = renumber.height_;
    const auto& passes = engine.passes();
    r.passes = passes.size() - first_pass;
    for (auto i = first_pass; i < passes.size(); ++i) {
        r.peak_live_records = std::max(r.peak_live_records, passes[i].peak_live_records);
    }
    return step;
}

MergeResult run_merges(PassEngine& engine, const ArmedStream& input) {
    const auto bound = merge_iteration_bound(input.height);
    MergeResult result;
    ArmedStream current = input;
    while (current.info_edges > 0) {
        const auto iteration = result.reports.size() + 1;
        if (iteration > bound) {
            throw IntegrityFault("merge iterations exceed ceil(log2(h+1)) = " + std::to_string(bound));
        }
        auto step = merge_iteration(engine, current, iteration);
        if (step.report.height_after != step.report.height_before / 2) {
            throw IntegrityFault("height " + std::to_string(step.report.height_before) + " became " +
                                 std::to_string(step.report.height_after) + ", not halved");
        }
        ++engine.stats().merge_iterations;
        result.reports.push_back(step.report);
        current = step.output;
    }
    result.stream = current.stream;
    return result;
}

Tour emit_tour(PassEngine& engine, const Stream& merged) {
    SortOrder by_position{"graph edges by position", [](const StreamItem& item) {
                              if (const auto* g = std::get_if<GraphEdge>(&item)) {
                                  return totalized_key({0, g->position}, item);
                              }
                              return totalized_key({1, 0}, item);
                          }};
    auto sorted = engine.sort_pass(by_position, merged, "emit_sort");

    Tour tour;
    tour.reserve(sorted.size());
    StreamReader reader(sorted);
    StreamItem item;
    std::optional<std::uint64_t> circuit;
    while (reader.next(item)) {
        const auto* g = std::get_if<GraphEdge>(&item);
        if (g == nullptr) {
            throw IntegrityFault("info edge left in the final stream");
        }
        if (circuit && *circuit != g->circuit) {
            throw IntegrityFault("final stream holds more than one circuit");
        }
        circuit = g->circuit;
        if (g->position != tour.size() + 1) {
            throw IntegrityFault("tour position " + std::to_string(g->position) + " where " +
                                 std::to_string(tour.size() + 1) + " was expected");
        }
        tour.push_back({g->tail, g->head});
    }
    return tour;
}

} // namespace strtour

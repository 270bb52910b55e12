#include "fixtures.hpp"

#include "strtour/engine.hpp"
#include "strtour/errors.hpp"
#include "strtour/generate.hpp"
#include "strtour/stream.hpp"

#include <doctest.h>

#include <algorithm>
#include <deque>
#include <filesystem>
#include <numeric>

using namespace strtour;

namespace {

class Identity final : public PassProcessor {
public:
    void on_item(const StreamItem& item, Emitter& out) override { out.emit(item); }
    LiveState live_state() const override { return {}; }
};

// Rewrites every graph edge's position to a running count.
class Counter final : public PassProcessor {
public:
    void on_item(const StreamItem& item, Emitter& out) override {
        auto g = std::get<GraphEdge>(item);
        g.position = ++count_;
        out.emit(g);
    }
    LiveState live_state() const override { return {0, 1}; }

private:
    std::uint64_t count_ = 0;
};

class EndOnly final : public PassProcessor {
public:
    void on_item(const StreamItem&, Emitter&) override {}
    void on_end(Emitter& out) override { out.emit(InfoEdge{1, 2, 0, 1, 0}); }
    LiveState live_state() const override { return {}; }
};

// Holds a window of the last k items and emits them delayed; tracks the true
// number held at any instant, including the item being processed.
class Delay final : public PassProcessor {
public:
    explicit Delay(std::size_t k) : k_(k) {}
    void on_item(const StreamItem& item, Emitter& out) override {
        held_.push_back(item);
        true_peak_ = std::max(true_peak_, held_.size());
        if (held_.size() > k_) {
            out.emit(held_.front());
            held_.pop_front();
        }
    }
    void on_end(Emitter& out) override {
        for (const auto& x : held_) {
            out.emit(x);
        }
        held_.clear();
    }
    LiveState live_state() const override {
        std::uint64_t words = 0;
        for (const auto& x : held_) {
            words += item_words(x);
        }
        return {held_.size(), words};
    }
    std::size_t true_peak_ = 0;

private:
    std::size_t k_;
    std::deque<StreamItem> held_;
};

std::vector<StreamItem> edges_with_circuits(std::vector<std::uint64_t> circuits) {
    std::vector<StreamItem> items;
    std::uint64_t i = 0;
    for (auto c : circuits) {
        items.push_back(GraphEdge{1, 2, c, ++i, 0, 0});
    }
    return items;
}

SortOrder by_circuit() {
    return {"circuit", [](const StreamItem& item) {
                SortKey k{};
                k[0] = std::get<GraphEdge>(item).circuit;
                return k;
            }};
}

} // namespace

TEST_CASE("identity pass copies the stream and counts one streaming pass") {
    PassEngine engine;
    const auto items = edges_with_circuits({5, 4, 3, 2, 1});
    auto in = engine.load(items);
    Identity id;
    auto out = engine.stream_pass(id, in, "identity");
    CHECK(engine.read(out) == items);
    CHECK(engine.stats().streaming_passes == 1);
    CHECK(engine.stats().sorting_passes == 0);
}

TEST_CASE("empty input yields only on_end emissions") {
    PassEngine engine;
    auto in = engine.load({});
    EndOnly p;
    auto out = engine.stream_pass(p, in, "end_only");
    REQUIRE(out.size() == 1);
    CHECK(engine.read(out)[0] == StreamItem{InfoEdge{1, 2, 0, 1, 0}});
}

TEST_CASE("counting pass over three graph edges holds one record") {
    PassEngine engine;
    auto in = engine.load(edges_with_circuits({9, 9, 9}));
    Counter c;
    auto out = engine.stream_pass(c, in, "count");
    const auto items = engine.read(out);
    REQUIRE(items.size() == 3);
    for (std::uint64_t i = 0; i < 3; ++i) {
        CHECK(std::get<GraphEdge>(items[i]).position == i + 1);
    }
    CHECK(engine.passes().back().peak_live_records == 1);
    CHECK(engine.stats().peak_live_records == 1);
}

TEST_CASE("sorting passes") {
    PassEngine engine;
    SUBCASE("already sorted stays identical") {
        const auto items = edges_with_circuits({1, 2, 3, 4});
        auto out = engine.sort_pass(by_circuit(), engine.load(items), "sort");
        CHECK(engine.read(out) == items);
    }
    SUBCASE("reverse sorted becomes ascending") {
        auto out = engine.sort_pass(by_circuit(), engine.load(edges_with_circuits({4, 3, 2, 1})), "sort");
        const auto got = engine.read(out);
        for (std::uint64_t i = 0; i < 4; ++i) {
            CHECK(std::get<GraphEdge>(got[i]).circuit == i + 1);
        }
        CHECK(engine.stats().sorting_passes == 1);
        CHECK(engine.stats().streaming_passes == 0);
    }
}

TEST_CASE("sorting is stable and a permutation, across many runs") {
    EngineOptions opts;
    opts.sort_run_items = 7;  // force a multiway merge
    PassEngine engine(opts);
    Rng rng(3);
    std::vector<std::uint64_t> circuits;
    for (int i = 0; i < 500; ++i) {
        circuits.push_back(rng.below(10));
    }
    const auto items = edges_with_circuits(circuits);
    auto out = engine.sort_pass(by_circuit(), engine.load(items), "sort");
    const auto got = engine.read(out);

    // Reference: indexed stable sort.
    std::vector<std::size_t> idx(items.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return circuits[a] < circuits[b]; });
    REQUIRE(got.size() == items.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        CHECK(got[i] == items[idx[i]]);
    }
}

TEST_CASE("totalized keys order by prefix, then kind, then every field") {
    const StreamItem g1 = GraphEdge{1, 2, 3, 4, 5, 6};
    const StreamItem g2 = GraphEdge{1, 2, 3, 4, 5, 7};
    const StreamItem e = InfoEdge{1, 2, 3, 4, 5};
    CHECK(totalized_key({1}, g1) < totalized_key({1}, g2));
    CHECK(totalized_key({1}, g2) < totalized_key({1}, e));
    CHECK(totalized_key({1}, e) < totalized_key({2}, g1));
    CHECK(totalized_key({0, 9}, g1) != totalized_key({0, 9}, g2));
}

TEST_CASE("pass composition equals replay on the materialized file") {
    fixtures::TempDir dir;
    const auto items = edges_with_circuits({3, 1, 2, 1, 3, 2});

    EngineOptions traced;
    traced.trace_dir = dir.path();
    PassEngine engine(traced);
    auto s0 = engine.load(items);
    auto s1 = engine.sort_pass(by_circuit(), s0, "sort");
    Counter c1;
    auto s2 = engine.stream_pass(c1, s1, "count");

    // Replay the second pass alone from the first pass's file.
    PassEngine replay;
    auto from_file = open_stream(s1.path());
    Counter c2;
    auto r2 = replay.stream_pass(c2, from_file, "count");
    CHECK(replay.read(r2) == engine.read(s2));

    // Trace files are named by pass index, phase and label.
    CHECK(std::filesystem::exists(dir / "001_main_sort.stream"));
    CHECK(std::filesystem::exists(dir / "002_main_count.stream"));
}

TEST_CASE("metered live records never undercount") {
    PassEngine engine;
    auto in = engine.load(edges_with_circuits({1, 2, 3, 4, 5, 6, 7, 8}));
    for (std::size_t k : {0u, 1u, 3u, 5u}) {
        Delay d(k);
        auto out = engine.stream_pass(d, in, "delay");
        CHECK(out.size() == 8);
        CHECK(engine.passes().back().peak_live_records >= d.true_peak_);
    }
}

TEST_CASE("stream length budget") {
    PassStats s;
    s.peak_stream_items = 180;
    CHECK(assert_stream_budget(s, 100).ok);
    s.peak_stream_items = 300;
    s.peak_stream_pass = 7;
    const auto v = assert_stream_budget(s, 100);
    CHECK_FALSE(v.ok);
    CHECK(v.limit == 204);
    CHECK(v.pass_index == 7);
    CHECK(v.message().find("pass 7") != std::string::npos);
}

TEST_CASE("engine removes its private work directory") {
    std::filesystem::path dir;
    {
        PassEngine engine;
        dir = engine.work_dir();
        CHECK(std::filesystem::exists(dir));
        auto s = engine.load(edges_with_circuits({1}));
        CHECK(s.path().parent_path() == dir);
    }
    CHECK_FALSE(std::filesystem::exists(dir));
}

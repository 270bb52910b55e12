#pragma once

#include "strtour/records.hpp"
#include "strtour/stream.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace strtour {

/// State a pass processor retains between callbacks. The item handed to
/// `on_item` is charged separately by the engine.
struct LiveState {
    std::uint64_t records = 0;
    std::uint64_t words = 0;
};

class Emitter {
public:
    virtual ~Emitter() = default;
    virtual void emit(const StreamItem& item) = 0;
};

/// One left-to-right read of a stream that writes a new stream.
class PassProcessor {
public:
    virtual ~PassProcessor() = default;

    virtual void on_start(Emitter&) {}
    virtual void on_item(const StreamItem& item, Emitter& out) = 0;
    virtual void on_end(Emitter&) {}
    virtual LiveState live_state() const = 0;
};

/// Lexicographic sort key. Orders that must be total append the full item
/// tuple via `totalized_key`.
using SortKey = std::array<std::uint64_t, 12>;

struct SortOrder {
    std::string name;
    std::function<SortKey(const StreamItem&)> key;
};

/// `prefix` followed by (kind, all fields) of `item`; kind is 0 for graph
/// edges and 1 for info edges. At most five prefix components.
SortKey totalized_key(std::initializer_list<std::uint64_t> prefix, const StreamItem& item);

enum class PassKind { Streaming, Sorting };

struct PassRecord {
    std::uint64_t index = 0;
    PassKind kind = PassKind::Streaming;
    std::string phase;
    std::string label;
    std::uint64_t items_in = 0;
    std::uint64_t items_out = 0;
    std::uint64_t peak_live_records = 0;
    std::uint64_t peak_live_words = 0;
};

struct PassStats {
    std::uint64_t streaming_passes = 0;
    std::uint64_t sorting_passes = 0;
    std::uint64_t peak_live_words = 0;
    std::uint64_t peak_live_records = 0;
    std::uint64_t peak_stream_items = 0;
    // Pass whose output set peak_stream_items (0 = the loaded input).
    std::uint64_t peak_stream_pass = 0;
    std::uint64_t merge_iterations = 0;
    std::uint64_t circuits_found = 0;
    std::uint64_t tree_height = 0;
};

struct EngineOptions {
    /// Intermediate streams go here; empty picks $STRTOUR_TMPDIR or the
    /// system temp directory and creates a private subdirectory.
    std::filesystem::path work_dir;
    /// When set, every stream is kept here as NNN_<phase>_<label>.stream.
    std::optional<std::filesystem::path> trace_dir;
    /// Items per in-memory run of the external sorter.
    std::size_t sort_run_items = std::size_t{1} << 16;
};

/// Runs streaming and sorting passes over materialized streams and meters
/// them.
class PassEngine {
public:
    explicit PassEngine(EngineOptions options = {});
    ~PassEngine();
    PassEngine(const PassEngine&) = delete;
    PassEngine& operator=(const PassEngine&) = delete;

    /// Materializes an input stream. Not a pass, but counted for stream length.
    Stream load(std::span<const StreamItem> items, std::string_view label = "input");

    Stream stream_pass(PassProcessor& processor, const Stream& input, std::string_view label);
    /// Stable: items with equal keys keep their input order.
    Stream sort_pass(const SortOrder& order, const Stream& input, std::string_view label);

    std::vector<StreamItem> read(const Stream& stream) const { return read_stream(stream); }

    void set_phase(std::string phase) { phase_ = std::move(phase); }
    const std::string& phase() const { return phase_; }

    const PassStats& stats() const { return stats_; }
    PassStats& stats() { return stats_; }
    const std::vector<PassRecord>& passes() const { return passes_; }
    const std::filesystem::path& work_dir() const { return work_dir_; }

private:
    std::filesystem::path next_path(std::string_view label, bool& keep);
    void note_stream_length(std::uint64_t items, std::uint64_t pass_index);

    EngineOptions options_;
    std::filesystem::path work_dir_;
    bool owns_work_dir_ = false;
    std::uint64_t file_counter_ = 0;
    std::string phase_ = "main";
    PassStats stats_;
    std::vector<PassRecord> passes_;
};

struct BudgetCheck {
    bool ok = true;
    std::uint64_t limit = 0;
    std::uint64_t peak = 0;
    std::uint64_t pass_index = 0;

    std::string message() const;
};

/// Stream length must stay within 2m + 4 items at every pass boundary.
BudgetCheck assert_stream_budget(const PassStats& stats, std::uint64_t m);

} // namespace strtour

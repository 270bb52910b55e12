#include "strtour/engine.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace strtour {

SortKey totalized_key(std::initializer_list<std::uint64_t> prefix, const StreamItem& item) {
    if (prefix.size() > 5) {
        throw std::logic_error("sort key prefix too long");
    }
    SortKey key{};
    std::size_t i = 0;
    for (auto v : prefix) {
        key[i++] = v;
    }
    if (const auto* g = std::get_if<GraphEdge>(&item)) {
        key[i++] = 0;
        for (std::uint64_t f : {std::uint64_t{g->tail}, std::uint64_t{g->head}, g->circuit, g->position, g->aux1, g->aux2}) {
            key[i++] = f;
        }
    } else {
        const auto& e = std::get<InfoEdge>(item);
        key[i++] = 1;
        for (std::uint64_t f : {e.pred, e.succ, e.depth, std::uint64_t{e.cvertex}, e.mark}) {
            key[i++] = f;
        }
    }
    return key;
}

namespace {

std::filesystem::path make_private_dir(const std::filesystem::path& base) {
    std::random_device rd;
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::ostringstream name;
        name << "strtour-" << ::getpid() << '-' << std::hex << rd();
        auto dir = base / name.str();
        if (std::filesystem::create_directory(dir)) {
            return dir;
        }
    }
    throw std::runtime_error("cannot create work directory under " + base.string());
}

class CountingEmitter final : public Emitter {
public:
    explicit CountingEmitter(StreamWriter& writer) : writer_(writer) {}
    void emit(const StreamItem& item) override { writer_.write(item); }

private:
    StreamWriter& writer_;
};

std::string sanitize(std::string_view label) {
    std::string out(label);
    for (auto& c : out) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) {
            c = '_';
        }
    }
    return out;
}

} // namespace

PassEngine::PassEngine(EngineOptions options) : options_(std::move(options)) {
    if (!options_.work_dir.empty()) {
        work_dir_ = options_.work_dir;
        std::filesystem::create_directories(work_dir_);
    } else {
        std::filesystem::path base;
        if (const char* env = std::getenv("STRTOUR_TMPDIR"); env != nullptr && *env != '\0') {
            base = env;
            std::filesystem::create_directories(base);
        } else {
            base = std::filesystem::temp_directory_path();
        }
        work_dir_ = make_private_dir(base);
        owns_work_dir_ = true;
    }
    if (options_.trace_dir) {
        std::filesystem::create_directories(*options_.trace_dir);
    }
    if (options_.sort_run_items == 0) {
        options_.sort_run_items = 1;
    }
}

PassEngine::~PassEngine() {
    if (owns_work_dir_) {
        std::error_code ec;
        std::filesystem::remove_all(work_dir_, ec);
    }
}

std::filesystem::path PassEngine::next_path(std::string_view label, bool& keep) {
    std::ostringstream name;
    name.fill('0');
    name.width(3);
    name << file_counter_++;
    name << '_' << sanitize(phase_) << '_' << sanitize(label) << ".stream";
    if (options_.trace_dir) {
        keep = true;
        return *options_.trace_dir / name.str();
    }
    keep = false;
    return work_dir_ / name.str();
}

void PassEngine::note_stream_length(std::uint64_t items, std::uint64_t pass_index) {
    if (items > stats_.peak_stream_items) {
        stats_.peak_stream_items = items;
        stats_.peak_stream_pass = pass_index;
    }
}

Stream PassEngine::load(std::span<const StreamItem> items, std::string_view label) {
    bool keep = false;
    auto path = next_path(label, keep);
    auto s = write_stream(path, items, keep);
    note_stream_length(s.size(), passes_.size());
    return s;
}

Stream PassEngine::stream_pass(PassProcessor& processor, const Stream& input, std::string_view label) {
    PassRecord rec;
    rec.index = passes_.size() + 1;
    rec.kind = PassKind::Streaming;
    rec.phase = phase_;
    rec.label = std::string(label);
    rec.items_in = input.size();

    auto sample = [&](std::uint64_t extra_records, std::uint64_t extra_words) {
        auto live = processor.live_state();
        rec.peak_live_records = std::max(rec.peak_live_records, live.records + extra_records);
        rec.peak_live_words = std::max(rec.peak_live_words, live.words + extra_words);
    };

    bool keep = false;
    auto out_path = next_path(label, keep);
    StreamWriter writer(out_path, keep);
    CountingEmitter out(writer);

    processor.on_start(out);
    sample(0, 0);
    StreamReader reader(input);
    StreamItem item;
    while (reader.next(item)) {
        processor.on_item(item, out);
        sample(1, item_words(item));
    }
    processor.on_end(out);
    sample(0, 0);

    auto result = writer.finish();
    rec.items_out = result.size();

    ++stats_.streaming_passes;
    stats_.peak_live_records = std::max(stats_.peak_live_records, rec.peak_live_records);
    stats_.peak_live_words = std::max(stats_.peak_live_words, rec.peak_live_words);
    note_stream_length(result.size(), rec.index);
    passes_.push_back(std::move(rec));
    return result;
}

Stream PassEngine::sort_pass(const SortOrder& order, const Stream& input, std::string_view label) {
    struct Keyed {
        SortKey key;
        StreamItem item;
    };
    auto by_key = [](const Keyed& a, const Keyed& b) { return a.key < b.key; };

    PassRecord rec;
    rec.index = passes_.size() + 1;
    rec.kind = PassKind::Sorting;
    rec.phase = phase_;
    rec.label = std::string(label);
    rec.items_in = input.size();

    std::vector<Stream> runs;
    std::vector<Keyed> buffer;
    buffer.reserve(std::min<std::uint64_t>(input.size(), options_.sort_run_items));
    StreamReader reader(input);
    StreamItem item;
    bool more = true;
    bool keep = false;
    auto out_path = next_path(label, keep);

    while (more) {
        buffer.clear();
        while (buffer.size() < options_.sort_run_items && (more = reader.next(item))) {
            buffer.push_back({order.key(item), item});
        }
        std::stable_sort(buffer.begin(), buffer.end(), by_key);
        if (runs.empty() && !more) {
            // Single run: write the result directly.
            StreamWriter w(out_path, keep);
            for (const auto& k : buffer) {
                w.write(k.item);
            }
            runs.push_back(w.finish());
            break;
        }
        if (buffer.empty()) {
            break;
        }
        StreamWriter w(work_dir_ / ("run_" + std::to_string(file_counter_++) + ".stream"), false);
        for (const auto& k : buffer) {
            w.write(k.item);
        }
        runs.push_back(w.finish());
    }

    Stream result;
    if (runs.size() == 1 && runs.front().path() == out_path) {
        result = runs.front();
    } else {
        // k-way merge; ties go to the earlier run, which keeps the sort stable.
        struct Head {
            SortKey key;
            std::size_t run;
            StreamItem item;
        };
        auto later = [](const Head& a, const Head& b) {
            return a.key != b.key ? a.key > b.key : a.run > b.run;
        };
        std::priority_queue<Head, std::vector<Head>, decltype(later)> heap(later);
        std::vector<StreamReader> readers;
        readers.reserve(runs.size());
        for (std::size_t r = 0; r < runs.size(); ++r) {
            readers.emplace_back(runs[r]);
            if (readers.back().next(item)) {
                heap.push({order.key(item), r, item});
            }
        }
        StreamWriter w(out_path, keep);
        while (!heap.empty()) {
            auto top = heap.top();
            heap.pop();
            w.write(top.item);
            if (readers[top.run].next(item)) {
                heap.push({order.key(item), top.run, item});
            }
        }
        result = w.finish();
    }

    rec.items_out = result.size();
    ++stats_.sorting_passes;
    note_stream_length(result.size(), rec.index);
    passes_.push_back(std::move(rec));
    return result;
}

std::string BudgetCheck::message() const {
    std::ostringstream os;
    if (ok) {
        os << "stream budget ok: peak " << peak << " <= " << limit;
    } else {
        os << "stream budget violated at pass " << pass_index << ": " << peak << " > " << limit;
    }
    return os.str();
}

BudgetCheck assert_stream_budget(const PassStats& stats, std::uint64_t m) {
    BudgetCheck check;
    check.limit = 2 * m + 4;
    check.peak = stats.peak_stream_items;
    check.pass_index = stats.peak_stream_pass;
    check.ok = check.peak <= check.limit;
    return check;
}

} // namespace strtour

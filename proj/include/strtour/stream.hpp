#pragma once

#include "strtour/records.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace strtour {

namespace detail {

// Owns one stream file on disk; removes it when the last handle goes away
// unless it was asked to keep it.
class StreamFile {
public:
    StreamFile(std::filesystem::path path, bool keep) : path_(std::move(path)), keep_(keep) {}
    ~StreamFile();
    StreamFile(const StreamFile&) = delete;
    StreamFile& operator=(const StreamFile&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    bool keep_;
};

} // namespace detail

/// Read-only handle to a materialized stream of items (one per line).
/// Copies share the underlying file.
class Stream {
public:
    Stream() = default;

    const std::filesystem::path& path() const;
    std::uint64_t size() const { return graph_items_ + info_items_; }
    std::uint64_t graph_items() const { return graph_items_; }
    std::uint64_t info_items() const { return info_items_; }
    bool valid() const { return file_ != nullptr; }

private:
    friend class StreamWriter;
    friend Stream open_stream(const std::filesystem::path& path);

    std::shared_ptr<const detail::StreamFile> file_;
    std::uint64_t graph_items_ = 0;
    std::uint64_t info_items_ = 0;
};

class StreamWriter {
public:
    /// `keep = false` deletes the file once every Stream handle to it is gone.
    StreamWriter(std::filesystem::path path, bool keep);

    void write(const StreamItem& item);
    Stream finish();

private:
    std::filesystem::path path_;
    bool keep_;
    std::ofstream out_;
    std::string line_;
    std::uint64_t graph_items_ = 0;
    std::uint64_t info_items_ = 0;
};

class StreamReader {
public:
    explicit StreamReader(const Stream& stream) : StreamReader(stream.path()) {}
    explicit StreamReader(const std::filesystem::path& path);

    /// False at end of stream.
    bool next(StreamItem& item);
    std::uint64_t line_number() const { return line_no_; }

private:
    std::ifstream in_;
    std::string line_;
    std::uint64_t line_no_ = 0;
};

/// Wraps an existing stream file (kept on disk). Validates every line.
Stream open_stream(const std::filesystem::path& path);

Stream write_stream(const std::filesystem::path& path, std::span<const StreamItem> items, bool keep = true);
std::vector<StreamItem> read_stream(const Stream& stream);

} // namespace strtour

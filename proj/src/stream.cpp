#include "strtour/stream.hpp"

#include "strtour/errors.hpp"

#include <system_error>

namespace strtour {

namespace detail {

StreamFile::~StreamFile() {
    if (!keep_) {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
}

} // namespace detail

const std::filesystem::path& Stream::path() const {
    static const std::filesystem::path empty;
    return file_ ? file_->path() : empty;
}

StreamWriter::StreamWriter(std::filesystem::path path, bool keep)
    : path_(std::move(path)), keep_(keep), out_(path_, std::ios::out | std::ios::trunc) {
    if (!out_) {
        throw std::runtime_error("cannot open stream file for writing: " + path_.string());
    }
}

void StreamWriter::write(const StreamItem& item) {
    line_.clear();
    encode_item(item, line_);
    line_ += '\n';
    out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
    if (is_graph_edge(item)) {
        ++graph_items_;
    } else {
        ++info_items_;
    }
}

Stream StreamWriter::finish() {
    out_.close();
    if (out_.fail()) {
        throw std::runtime_error("failed writing stream file: " + path_.string());
    }
    Stream s;
    s.file_ = std::make_shared<detail::StreamFile>(path_, keep_);
    s.graph_items_ = graph_items_;
    s.info_items_ = info_items_;
    return s;
}

StreamReader::StreamReader(const std::filesystem::path& path) : in_(path) {
    if (!in_) {
        throw std::runtime_error("cannot open stream file: " + path.string());
    }
}

bool StreamReader::next(StreamItem& item) {
    if (!std::getline(in_, line_)) {
        return false;
    }
    ++line_no_;
    item = decode_item(line_, line_no_);
    return true;
}

Stream open_stream(const std::filesystem::path& path) {
    StreamReader reader(path);
    Stream s;
    StreamItem item;
    while (reader.next(item)) {
        if (is_graph_edge(item)) {
            ++s.graph_items_;
        } else {
            ++s.info_items_;
        }
    }
    s.file_ = std::make_shared<detail::StreamFile>(path, true);
    return s;
}

Stream write_stream(const std::filesystem::path& path, std::span<const StreamItem> items, bool keep) {
    StreamWriter w(path, keep);
    for (const auto& item : items) {
        w.write(item);
    }
    return w.finish();
}

std::vector<StreamItem> read_stream(const Stream& stream) {
    std::vector<StreamItem> items;
    items.reserve(stream.size());
    StreamReader reader(stream);
    StreamItem item;
    while (reader.next(item)) {
        items.push_back(item);
    }
    return items;
}

} // namespace strtour

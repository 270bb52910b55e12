#include "strtour/records.hpp"

#include "strtour/errors.hpp"

#include <array>
#include <charconv>
#include <limits>

namespace strtour {

std::string_view to_string(NotEulerianReason reason) {
    switch (reason) {
    case NotEulerianReason::OddDegree: return "odd degree";
    case NotEulerianReason::Disconnected: return "disconnected";
    }
    return "unknown";
}

NotEulerian::NotEulerian(NotEulerianReason reason)
    : std::runtime_error("not eulerian: " + std::string(to_string(reason))), reason_(reason) {}

ParseError::ParseError(std::uint64_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

void append_number(std::string& out, std::uint64_t value) {
    std::array<char, 24> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    out.append(buf.data(), end);
}

// Splits on single spaces; empty tokens (double spaces, leading or trailing
// blanks) are reported as malformed.
template <std::size_t N>
std::size_t split_fields(std::string_view line, std::array<std::string_view, N>& fields,
                         std::uint64_t line_no) {
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
        auto stop = line.find(' ', start);
        auto token = line.substr(start, stop == std::string_view::npos ? std::string_view::npos : stop - start);
        if (token.empty()) {
            throw ParseError(line_no, "empty field");
        }
        if (count == N) {
            throw ParseError(line_no, "too many fields");
        }
        fields[count++] = token;
        if (stop == std::string_view::npos) {
            break;
        }
        start = stop + 1;
    }
    return count;
}

std::uint64_t parse_number(std::string_view token, std::uint64_t line_no,
                           std::uint64_t max = std::numeric_limits<std::uint64_t>::max()) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(line_no, "invalid number '" + std::string(token) + "'");
    }
    if (value > max) {
        throw ParseError(line_no, "number out of range '" + std::string(token) + "'");
    }
    return value;
}

Vertex parse_vertex(std::string_view token, std::uint64_t line_no) {
    auto v = parse_number(token, line_no, std::numeric_limits<Vertex>::max());
    if (v == 0) {
        throw ParseError(line_no, "vertex label 0");
    }
    return static_cast<Vertex>(v);
}

} // namespace

void encode_item(const StreamItem& item, std::string& out) {
    if (const auto* g = std::get_if<GraphEdge>(&item)) {
        out += 'G';
        for (std::uint64_t f : {std::uint64_t{g->tail}, std::uint64_t{g->head}, g->circuit, g->position, g->aux1, g->aux2}) {
            out += ' ';
            append_number(out, f);
        }
    } else {
        const auto& e = std::get<InfoEdge>(item);
        out += 'I';
        for (std::uint64_t f : {e.pred, e.succ, e.depth, std::uint64_t{e.cvertex}, e.mark}) {
            out += ' ';
            append_number(out, f);
        }
    }
}

std::string encode_item(const StreamItem& item) {
    std::string out;
    encode_item(item, out);
    return out;
}

StreamItem decode_item(std::string_view line, std::uint64_t line_no) {
    std::array<std::string_view, 7> f{};
    const auto count = split_fields(line, f, line_no);
    if (f[0] == "G") {
        if (count != 7) {
            throw ParseError(line_no, "graph edge needs 6 fields, got " + std::to_string(count - 1));
        }
        return GraphEdge{parse_vertex(f[1], line_no), parse_vertex(f[2], line_no), parse_number(f[3], line_no),
                         parse_number(f[4], line_no), parse_number(f[5], line_no), parse_number(f[6], line_no)};
    }
    if (f[0] == "I") {
        if (count != 6) {
            throw ParseError(line_no, "info edge needs 5 fields, got " + std::to_string(count - 1));
        }
        return InfoEdge{parse_number(f[1], line_no), parse_number(f[2], line_no), parse_number(f[3], line_no),
                        parse_vertex(f[4], line_no), parse_number(f[5], line_no)};
    }
    throw ParseError(line_no, "unknown item tag '" + std::string(f[0]) + "'");
}

} // namespace strtour

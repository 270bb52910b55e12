#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace strtour {

/// Vertex labels are 1..n.
using Vertex = std::uint32_t;
/// Circuit labels are 1..q, assigned in discovery order.
using CircuitId = std::uint64_t;

/// A directed edge of the input graph.
///
/// Steady state: `circuit` and `position` place the edge in its circuit and
/// `aux1 = aux2 = 0`. While a merge is in flight `circuit`/`position` name the
/// host circuit and insertion slot and `aux1`/`aux2` keep the original circuit
/// and position. During rotation `aux1`/`aux2` of a circuit's first edge carry
/// the circuit length and pivot.
struct GraphEdge {
    Vertex tail = 0;
    Vertex head = 0;
    std::uint64_t circuit = 0;
    std::uint64_t position = 0;
    std::uint64_t aux1 = 0;
    std::uint64_t aux2 = 0;

    friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// A tree edge between two circuits: `pred` is the parent of `succ`, `depth`
/// is the depth of `pred`, `cvertex` lies on both circuits. `mark` is 0/1 as a
/// flag, and holds an insertion slot inside a merge iteration.
struct InfoEdge {
    CircuitId pred = 0;
    CircuitId succ = 0;
    std::uint64_t depth = 0;
    Vertex cvertex = 0;
    std::uint64_t mark = 0;

    friend bool operator==(const InfoEdge&, const InfoEdge&) = default;
};

using StreamItem = std::variant<GraphEdge, InfoEdge>;

inline constexpr std::uint64_t kGraphEdgeWords = 6;
inline constexpr std::uint64_t kInfoEdgeWords = 5;

inline bool is_graph_edge(const StreamItem& item) { return std::holds_alternative<GraphEdge>(item); }
inline bool is_info_edge(const StreamItem& item) { return std::holds_alternative<InfoEdge>(item); }

inline std::uint64_t item_words(const StreamItem& item) {
    return is_graph_edge(item) ? kGraphEdgeWords : kInfoEdgeWords;
}

/// Appends the single-line text form of `item` (no newline) to `out`.
void encode_item(const StreamItem& item, std::string& out);
std::string encode_item(const StreamItem& item);

/// Parses one stream line. `line_no` is only used in error messages.
/// Throws ParseError on malformed input.
StreamItem decode_item(std::string_view line, std::uint64_t line_no = 0);

} // namespace strtour

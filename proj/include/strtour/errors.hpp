#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace strtour {

enum class NotEulerianReason { OddDegree, Disconnected };

std::string_view to_string(NotEulerianReason reason);

/// Raised by a pass processor when the input graph admits no Euler tour.
class NotEulerian : public std::runtime_error {
public:
    explicit NotEulerian(NotEulerianReason reason);

    NotEulerianReason reason() const noexcept { return reason_; }

private:
    NotEulerianReason reason_;
};

/// A stream violated an invariant the algorithm relies on.
class IntegrityFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text in a stream, graph or tour file.
class ParseError : public std::runtime_error {
public:
    ParseError(std::uint64_t line, const std::string& what);

    std::uint64_t line() const noexcept { return line_; }

private:
    std::uint64_t line_;
};

/// Rejected input graph or infeasible parameters.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace strtour

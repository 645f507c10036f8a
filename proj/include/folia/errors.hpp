#pragma once

#include <stdexcept>
#include <string>

namespace folia {

/// Bad user input: rank mismatches, malformed rationals, index bounds.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Buchberger exceeded the configured total-degree bound.
struct DegreeGuardError : std::runtime_error {
    int degree;
    int bound;
    DegreeGuardError(int degree_, int bound_)
        : std::runtime_error("degree guard: intermediate element of total degree " +
                             std::to_string(degree_) + " exceeds bound " + std::to_string(bound_)),
          degree(degree_),
          bound(bound_) {}
};

/// Trajectory left the configured escape radius (or went non-finite) before the requested time.
struct FlowEscapeError : std::runtime_error {
    double time_reached;
    FlowEscapeError(const std::string& what_, double time_reached_)
        : std::runtime_error(what_), time_reached(time_reached_) {}
};

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int line_, int column_, const std::string& message)
        : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                             std::to_string(column_) + ": " + message),
          line(line_),
          column(column_) {}
};

}  // namespace folia

#pragma once

#include <stdexcept>
#include <string>

namespace hypmnnr {

/// Thrown when an operation is asked of a model that cannot support it
/// (e.g. a density query on a point-mass mark model).
class UnsupportedOperation : public std::logic_error {
public:
    explicit UnsupportedOperation(const std::string& what) : std::logic_error(what) {}
};

/// Thrown by iterative numerical routines that fail to reach the requested
/// tolerance. Carries the best estimate obtained so far.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double best)
        : std::runtime_error(what), best_estimate(best) {}
    double best_estimate;
};

/// Thrown by file parsers; carries the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_number(line) {}
    long line_number;
};

} // namespace hypmnnr

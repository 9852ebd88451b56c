#pragma once

#include <stdexcept>
#include <string>

namespace conekit {

// Parse failure in an external text format (DIMACS, JSON, CSV).
// line is 1-based; 0 means "no particular line".
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

// An iterative numerical routine failed to converge or lost too much
// precision to certify its result.  residual carries the offending
// quantity (off-diagonal norm, constraint violation, ...) when known.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace conekit

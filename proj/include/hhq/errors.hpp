#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hhq {

// Expression text could not be parsed. `offset` is the byte position of the
// first offending character.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t offset)
        : std::runtime_error(std::move(msg)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// A function evaluation hit a domain violation or produced a non-finite
// value. Carries the input point where it happened.
class EvalError : public std::runtime_error {
public:
    EvalError(std::string msg, double x)
        : std::runtime_error(std::move(msg)), x_(x) {}
    double at() const noexcept { return x_; }

private:
    double x_;
};

// An operation needed shape metadata (convex/concave/positive/increasing)
// that the function does not declare, or a declared shape failed validation.
class ShapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The reference integrator could not certify its result to the required
// uncertainty.
class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hhq

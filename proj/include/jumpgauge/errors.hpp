#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jumpgauge {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A point was handed to a space of a different variant.
class SpaceMismatch : public Error {
public:
    using Error::Error;
};

// Arguments outside the operation's precondition.
class DomainError : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::string cap, std::size_t limit)
        : Error("budget exceeded: " + cap + " (limit " + std::to_string(limit) + ")"),
          cap_(std::move(cap)), limit_(limit) {}
    const std::string& cap() const noexcept { return cap_; }
    std::size_t limit() const noexcept { return limit_; }

private:
    std::string cap_;
    std::size_t limit_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::string location)
        : Error("parse error at " + location + ": " + what), location_(std::move(location)) {}
    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};

// A model failed the equational residual check required before a driver runs.
class GateFailure : public Error {
public:
    GateFailure(const std::string& theory, double residual)
        : Error("residual gate failed for theory " + theory + ": residual " +
                std::to_string(residual)),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class ScopeError : public Error {
public:
    using Error::Error;
};

}  // namespace jumpgauge

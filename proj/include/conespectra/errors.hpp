#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace conespectra {

// Base error carrying a machine-parsable category used by the CLI
// failure prefix `error:<category>:`.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& msg)
        : std::runtime_error(msg), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error("domain", msg) {}
};

struct CoverageError : Error {
    explicit CoverageError(const std::string& msg) : Error("coverage", msg) {}
};

struct MismatchedConeError : Error {
    explicit MismatchedConeError(const std::string& msg) : Error("mismatched-cone", msg) {}
};

struct SingularGramError : Error {
    explicit SingularGramError(const std::string& msg) : Error("singular-gram", msg) {}
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error("dimension", msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse", msg) {}
};

struct ResourceError : Error {
    explicit ResourceError(const std::string& msg) : Error("resource", msg) {}
};

struct ConvergenceError : Error {
    ConvergenceError(const std::string& msg, double achieved_residual)
        : Error("convergence", msg), achieved_residual(achieved_residual) {}
    double achieved_residual;
};

struct InsufficientDataError : Error {
    explicit InsufficientDataError(const std::string& msg) : Error("insufficient-data", msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("io", msg) {}
};

}  // namespace conespectra

#pragma once

#include <stdexcept>
#include <string>

namespace rmcurve {

/// Base class for all library errors. `code()` is a stable machine-readable
/// tag that the CLI writes into summary.json and maps to exit codes.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Invalid model data or operation arguments (exit code 1).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error("VALIDATION", what) {}
};

/// Configuration file problems: parse errors, constraint violations (exit code 1).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("CONFIG", what) {}
};

/// Critical spectral curve: two branch points closer than the criticality
/// threshold. Callers use this to detect phase transitions (exit code 2).
class DegenerateCurveError : public Error {
public:
    explicit DegenerateCurveError(const std::string& what)
        : Error("DEGENERATE_CURVE", what) {}
};

/// Configuration outside the supported regime, e.g. the model RH solution
/// requested for a curve with complex branch points (exit code 2).
class UnsupportedError : public Error {
public:
    UnsupportedError(std::string code, const std::string& what)
        : Error(std::move(code), what) {}
};

/// Numerical failure: homotopy stalled near a branch point, Newton
/// divergence, configuration outside the generic assumptions (exit code 2).
class NumericsError : public Error {
public:
    explicit NumericsError(const std::string& what) : Error("NUMERICS", what) {}
};

} // namespace rmcurve

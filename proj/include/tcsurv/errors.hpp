#pragma once

#include <stdexcept>
#include <string>

namespace tcsurv {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input file is structurally wrong (missing/duplicate columns).
struct SchemaError : Error {
    using Error::Error;
};

// A cell or row failed validation; carries the 1-based line number.
struct ParseError : Error {
    ParseError(std::size_t line_no, const std::string& msg)
        : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
    std::size_t line;
};

// Dataset too small for the requested operation.
struct SizeError : Error {
    using Error::Error;
};

// Bad configuration value (unknown setting id, invalid range, ...).
struct ConfigError : Error {
    using Error::Error;
};

// Argument outside its mathematical domain (prob not in [0,1], t < 0, ...).
struct DomainError : Error {
    using Error::Error;
};

// Model fitting failed; carries solver diagnostics.
struct FitError : Error {
    FitError(const std::string& msg, int iters, double grad_norm)
        : Error(msg + " (iterations=" + std::to_string(iters) +
                ", max|score|=" + std::to_string(grad_norm) + ")"),
          iterations(iters), max_score(grad_norm) {}
    explicit FitError(const std::string& msg) : Error(msg), iterations(0), max_score(0) {}
    int iterations;
    double max_score;
};

// A denominator in the influence function dropped below the numeric floor.
struct NumericGuardError : Error {
    NumericGuardError(double at_time, const std::string& what_denom)
        : Error("denominator below floor in " + what_denom +
                " at u=" + std::to_string(at_time)),
          u(at_time) {}
    double u;
};

// Selection rule rejected every candidate and no fallback was requested.
struct NoSelectionError : Error {
    using Error::Error;
};

}  // namespace tcsurv

#pragma once

#include <stdexcept>
#include <string>

namespace rotunsim {

/// Invalid parameters, inputs, or files. The CLI maps this to exit code 1.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed config/scenario/sweep text; message carries the line number.
class ParseError : public DomainError {
public:
    ParseError(int line, const std::string& what)
        : DomainError("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// The steady-turn balance has no pendulum angle that satisfies it.
class InfeasibleLeanError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace rotunsim

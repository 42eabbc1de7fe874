#pragma once

#include <stdexcept>
#include <string>

namespace stphase {

// Violated precondition of a mathematical operation. The CLI maps these to exit code 1.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public DomainError {
public:
    DivisionByZero() : DomainError("division by zero") {}
    using DomainError::DomainError;
};

// An m-th root could not be realized inside the supported field tower.
class RootAdjunctionError : public DomainError {
public:
    using DomainError::DomainError;
};

// A truncated series does not carry enough known terms for the requested result.
class PrecisionError : public DomainError {
public:
    using DomainError::DomainError;
};

// Internal consistency check failed (exit code 3).
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Syntax or semantic error in DSL / JSON input (exit code 2).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int column, const std::string& source = "")
        : std::runtime_error((source.empty() ? "" : source + ":") + std::to_string(line) + ":" +
                             std::to_string(column) + ": " + msg),
          message_(msg),
          source_(source),
          line_(line),
          column_(column) {}

    const std::string& message() const noexcept { return message_; }
    // File name or JSON path the position refers to; empty for a bare string.
    const std::string& source() const noexcept { return source_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    std::string message_;
    std::string source_;
    int line_;
    int column_;
};

} // namespace stphase

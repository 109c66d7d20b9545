#pragma once

#include <stdexcept>
#include <string>

namespace tacert {

/// Malformed or out-of-domain input (bad entries, bad sizes, bad files).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Request exceeds a hard size cap (brute force, LP vertex count, series order).
class ResourceError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Text parse failure with a 1-based source position.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, int line, int column)
        : InputError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace tacert

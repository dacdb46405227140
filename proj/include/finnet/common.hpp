#pragma once

#include <stdexcept>
#include <string>

namespace finnet {

/// Base class for all finnet errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid input data or configuration (exit code 2 at the CLI).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// CSV/config parse failure, carries a 1-based row/column location.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& msg, int row, int col)
        : ValidationError(msg + " at (row " + std::to_string(row) + ", col " + std::to_string(col) + ")"),
          row_(row), col_(col) {}
    int row() const { return row_; }
    int col() const { return col_; }

private:
    int row_;
    int col_;
};

/// Numerical failure, e.g. an eigensolver that did not converge (exit code 3).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

/// Filesystem / stream failure (exit code 4).
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace finnet

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epiclust {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (files, tables, fixtures).
class InputError : public Error {
public:
    using Error::Error;
};

/// A CSV cell or line that failed to parse or validate. Rows and columns
/// are 1-based and refer to the physical file layout (row 1 is the header).
class ParseError : public InputError {
public:
    ParseError(const std::string& path, std::size_t row, std::size_t column, const std::string& what)
        : InputError(path + ":" + std::to_string(row) + ":" + std::to_string(column) + ": " + what),
          row_{row}, column_{column} {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

} // namespace epiclust

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dzeta {

/// Base for every failure raised by the library. The CLI maps each subclass
/// to a stable process exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition (exit code 2).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Reading or writing a file failed (exit code 3).
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input data, e.g. an eigenvalue file (exit code 4).
class DataFormatError : public Error {
public:
    DataFormatError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace dzeta

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace faco {

/// Malformed instance or tour text. `line()` is 1-based; 0 means end of input.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &message, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnsupportedFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidTourError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by checked accessors when a caller breaks a precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace faco

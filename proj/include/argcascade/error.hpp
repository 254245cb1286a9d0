#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace argcascade {

/// Base of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data could not be parsed. `location()` is a 1-based record ordinal
/// or line number depending on the format (0 when unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t location = 0)
        : Error(location ? what + " (at " + std::to_string(location) + ")" : what),
          location_(location) {}

    std::size_t location() const noexcept { return location_; }

private:
    std::size_t location_;
};

/// Well-formed input that violates a contract (simplex, alignment, counts).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Missing or inconsistent configuration, detected before any network call.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure.
class IoError : public Error {
public:
    using Error::Error;
};

/// Network failure after the retry budget is spent.
class TransportError : public Error {
public:
    TransportError(const std::string& what, int status = 0) : Error(what), status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};

} // namespace argcascade

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ghabuse {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class PreconditionViolation : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

/// Snapshot / weight-file schema problems (version mismatch, unknown fields).
class SchemaError : public Error {
public:
    using Error::Error;
};

class SubjectNotFound : public Error {
public:
    using Error::Error;
};

class RateLimited : public Error {
public:
    RateLimited(const std::string& what, std::int64_t reset_at)
        : Error(what), reset_at_(reset_at) {}

    /// UTC seconds at which the API advertised the limit resets.
    std::int64_t reset_at() const noexcept { return reset_at_; }

private:
    std::int64_t reset_at_;
};

class TransportError : public Error {
public:
    using Error::Error;
};

}  // namespace ghabuse

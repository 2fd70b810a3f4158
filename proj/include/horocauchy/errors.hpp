#pragma once

#include <stdexcept>
#include <string>

namespace horocauchy {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wrong shape or kind of input (dimension mismatch, complex where real is required, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A value failed a membership or group invariant check.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The operation is undefined at the requested point (kernel singular on the cycle, series divergent, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Non-finite intermediate values or a non-converging numerical procedure.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Requested configuration is valid in principle but not built (e.g. sphere cycles for d != 2).
class FeatureError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::string key, const std::string& what)
        : Error("config key '" + key + "': " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace horocauchy

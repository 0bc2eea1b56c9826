#pragma once

#include <stdexcept>
#include <string>

namespace optomech {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDimensionError : Error {
    using Error::Error;
};

struct LayoutMismatchError : Error {
    using Error::Error;
};

struct InvalidParameterError : Error {
    using Error::Error;
};

struct HermiticityError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

// Raised when a result cannot be certified against truncation (resource cap,
// variational instability of the truncated problem, ...). Callers usually see
// an unconverged result instead of this exception; it is thrown only where the
// contract demands refusal (e.g. squeezing extraction from unconverged data).
struct TruncationUnresolvedError : Error {
    using Error::Error;
};

struct InvalidGridError : Error {
    using Error::Error;
};

struct UnsupportedDirectionError : Error {
    using Error::Error;
};

struct InvalidRegimeError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    ConfigError(const std::string& field, const std::string& what)
        : Error("config field '" + field + "': " + what), field_name(field) {}
    explicit ConfigError(const std::string& what) : Error(what) {}
    std::string field_name;
};

}  // namespace optomech

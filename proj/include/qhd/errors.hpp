#pragma once

#include <stdexcept>
#include <string>

namespace qhd {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownFunction : Error {
    explicit UnknownFunction(const std::string& name)
        : Error("unknown function: " + name) {}
};

struct DomainViolation : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct SizeLimit : Error {
    using Error::Error;
};

struct InsufficientRuns : Error {
    using Error::Error;
};

struct EmptyWindow : Error {
    using Error::Error;
};

struct TooFewPoints : Error {
    using Error::Error;
};

struct UsageError : Error {
    using Error::Error;
};

}  // namespace qhd

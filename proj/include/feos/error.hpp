#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace feos {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed config files, inconsistent grids.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Caller violated an operation's preconditions (e.g. mismatched grids).
class UsageError : public Error {
public:
    using Error::Error;
};

/// A sampled function produced a non-finite value.
class SamplingError : public Error {
public:
    using Error::Error;
};

/// A numerical self-check failed (should not happen for valid inputs).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Power-law fit could not be formed from the supplied series.
class FitError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Non-finite values appeared while time stepping.
class BlowUpError : public Error {
public:
    BlowUpError(const std::string& what, int stage, std::size_t node)
        : Error(what), stage_(stage), node_(node) {}

    int stage() const noexcept { return stage_; }
    std::size_t node() const noexcept { return node_; }

private:
    int stage_;
    std::size_t node_;
};

/// The subcycling loop exceeded its step ceiling.
class RunawayError : public Error {
public:
    using Error::Error;
};

}  // namespace feos

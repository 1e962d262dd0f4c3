#pragma once

#include <stdexcept>
#include <string>

namespace sadrc {

/// Base of every fault raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite state, divergence, singular systems.
class NumericalError : public Error
{
public:
    using Error::Error;
};

/// Malformed or insufficient input data.
class DataError : public Error
{
public:
    using Error::Error;
};

/// Invalid configuration value or unknown key.
class ConfigError : public Error
{
public:
    using Error::Error;
};

class SpectralRadiusError : public NumericalError
{
public:
    SpectralRadiusError(const std::string& what, double best_estimate)
        : NumericalError(what), best_estimate_(best_estimate)
    {}

    double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

} // namespace sadrc

#pragma once

#include <stdexcept>
#include <string>

namespace bdp {

/// The spectral parameter g2 (g3 + 1) / g3 is undefined (g3 = 0) or zero.
/// Callers are expected to fall back to the finite-sum expression.
class DegenerateSpectral : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computed quantity failed a numerical sanity check.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An adaptive integrator could not make progress.
class IntegrationFailure : public NumericalError {
public:
    IntegrationFailure(const std::string& what, double reached_time)
        : NumericalError(what + " (reached t = " + std::to_string(reached_time) + ")"),
          reached_time_(reached_time) {}

    double reached_time() const noexcept { return reached_time_; }

private:
    double reached_time_;
};

/// A truncated state space would exceed its hard size limit.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid configuration input.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace bdp

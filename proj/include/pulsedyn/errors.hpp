#pragma once

#include <stdexcept>
#include <string>

namespace pulsedyn {

/// Argument outside its admissible range (state outside [0, x_max], bad pulse
/// strength, nonpositive period, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Trajectory left [0, x_max] during integration or after a pulse.
class EscapeError : public std::runtime_error {
public:
    EscapeError(double x, double t)
        : std::runtime_error("trajectory escaped the domain cap at t=" + std::to_string(t) +
                             " (x=" + std::to_string(x) + ")"),
          x_escape(x), t_escape(t) {}
    double x_escape;
    double t_escape;
};

/// Adaptive integrator exceeded its step budget.
class StepLimitError : public std::runtime_error {
public:
    explicit StepLimitError(long limit)
        : std::runtime_error("integrator exceeded max_steps=" + std::to_string(limit)) {}
};

/// An operation-level precondition does not hold (A >= 0 where A < 0 is
/// required, lambda = 0 for the omega scan, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// classify() was handed a point that is not a fixed point of (1+lambda) R.
class NotAFixedPointError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

/// Config file unreadable or structurally invalid.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pulsedyn

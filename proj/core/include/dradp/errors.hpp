#pragma once

#include <stdexcept>
#include <string>

namespace dradp {

/// Base class for solver-side failures. Malformed inputs are reported with
/// std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative method ran out of iterations before reaching its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

class InfeasibleError : public Error {
public:
    using Error::Error;
};

class UnboundedError : public Error {
public:
    using Error::Error;
};

/// Internal numerical breakdown (stalled pivoting, singular systems that
/// should not be singular).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The work budget ran out before any usable answer was found.
class TimeLimitError : public Error {
public:
    using Error::Error;
};

/// The big-M constant could not be certified after the allowed number of
/// doublings.
class TauEscalationError : public Error {
public:
    TauEscalationError(const std::string& what, double final_lambda2_norm)
        : Error(what), final_lambda2_norm_(final_lambda2_norm) {}
    double final_lambda2_norm() const noexcept { return final_lambda2_norm_; }

private:
    double final_lambda2_norm_;
};

} // namespace dradp

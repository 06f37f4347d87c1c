#pragma once

#include <stdexcept>
#include <string>

namespace uq {

/// Parameters outside the region where an analytic formula holds (rho >= 1
/// for steady-state quantities, lambda == 0 for transient integrals).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Adaptive quadrature gave up before meeting its tolerance. Carries the
/// best estimate reached so callers can still report it.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double estimate, double error_estimate)
        : std::runtime_error(what), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

/// A truncated state sum whose neglected tail could not be bounded below
/// the requested tolerance.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, double tail_bound)
        : std::runtime_error(what), tail_bound_(tail_bound) {}

    double tail_bound() const noexcept { return tail_bound_; }

private:
    double tail_bound_;
};

/// An integrand exceeded the growth envelope its caller declared.
class EnvelopeViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace uq

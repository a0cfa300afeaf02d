#pragma once

#include <stdexcept>
#include <string>

namespace dhlab {

/// Precondition on a mathematical domain failed (empty range, k out of range, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A PrimeTable was asked about values beyond its sieve limit.
class InsufficientTable : public std::out_of_range {
public:
    InsufficientTable(const std::string& what, double needed)
        : std::out_of_range(what), needed_(needed) {}
    double needed() const noexcept { return needed_; }

private:
    double needed_;
};

/// Adaptive quadrature gave up; carries the last residual estimate.
class NumericFailure : public std::runtime_error {
public:
    NumericFailure(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// The extended-precision phase reduction cannot honour its accuracy
/// contract for the requested alpha range.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integration grid is coarser than the Nyquist-safe step for the sum.
class StepTooCoarse : public std::invalid_argument {
public:
    StepTooCoarse(const std::string& what, double max_step)
        : std::invalid_argument(what), max_step_(max_step) {}
    double max_step() const noexcept { return max_step_; }

private:
    double max_step_;
};

/// Arc parameters violate P > 1 or R > 1/eta (or eta < 1).
class ParameterError : public std::invalid_argument {
public:
    ParameterError(const std::string& what, std::string inequality, double minimal_x)
        : std::invalid_argument(what), inequality_(std::move(inequality)), minimal_x_(minimal_x) {}
    const std::string& inequality() const noexcept { return inequality_; }
    /// Smallest X restoring the inequality, or NaN when no X does.
    double minimal_x() const noexcept { return minimal_x_; }

private:
    std::string inequality_;
    double minimal_x_;
};

}  // namespace dhlab

#pragma once

#include <stdexcept>
#include <string>

namespace doi {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside its documented range (n < 2, non-unit director, ...).
struct invalid_parameter : error {
    using error::error;
};

/// A numerically ill-posed request: divergent moment, non-finite integrand,
/// evaluation at a singular point.
struct numeric_domain_error : error {
    using error::error;
};

/// Requested density lies at or below the critical density: no nematic branch.
struct no_branch_error : error {
    double rho_star;
    no_branch_error(const std::string& msg, double rho_star_)
        : error(msg), rho_star(rho_star_) {}
};

/// An iterative solver hit its iteration cap.
struct iteration_limit_error : error {
    using error::error;
};

/// A discrete solve did not reach the requested residual at the largest
/// admissible resolution.
struct resolution_error : error {
    double residual;
    resolution_error(const std::string& msg, double residual_)
        : error(msg), residual(residual_) {}
};

/// Q-tensor vanishes, so the normalized tensor / director is undefined.
struct degenerate_moment_error : error {
    using error::error;
};

/// Reconstructed distribution is negative beyond the monitoring tolerance.
struct positivity_error : error {
    using error::error;
};

/// Time integrator detected blow-up; carries the last completed time.
struct integrator_error : error {
    double last_good_time;
    integrator_error(const std::string& msg, double t)
        : error(msg), last_good_time(t) {}
};

/// Singular-value gap too small to identify a numerical kernel.
struct ambiguous_kernel_error : error {
    using error::error;
};

/// A coefficient that must be nonzero (gamma_1, Lambda, ...) vanished.
struct singular_coefficient_error : error {
    using error::error;
};

/// Lambda = 0 requested on an operation that requires Lambda != 0; the
/// Lambda-independent variant must be used instead.
struct lambda_zero_error : error {
    using error::error;
};

} // namespace doi

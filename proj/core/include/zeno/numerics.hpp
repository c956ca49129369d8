#pragma once

// Adaptive quadrature and bracketing root finding shared by the physics modules.
//
// Quadrature is globally adaptive Gauss-Kronrod (7/15 points). Infinite limits are
// mapped onto [0,1) with x = a + t/(1-t) unless an oscillation frequency is supplied,
// in which case the range is summed period by period and the truncated tail is removed
// by Richardson extrapolation in 1/X.

#include <complex>
#include <functional>
#include <optional>
#include <span>

namespace zeno::numerics {

using Complex = std::complex<double>;
using ComplexIntegrand = std::function<Complex(double)>;
using RealFunction = std::function<double(double)>;

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    /// Maximum number of interval bisections beyond the initial partition.
    int max_subdivisions = 5000;
    /// Angular frequency of the dominant oscillation of the integrand.
    std::optional<double> oscillatory_hint;

    void validate() const;
    bool operator==(const QuadratureSpec&) const = default;
};

struct QuadratureResult {
    Complex value;
    double error = 0.0;
    long evaluations = 0;
};

struct RealQuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Integrates f over [a, b]; either limit may be infinite.
/// Throws DomainError when a >= b and NonConvergence when the bisection budget runs out
/// before error <= max(abs_tol, rel_tol*|result|).
QuadratureResult integrate(const ComplexIntegrand& f, double a, double b,
                           const QuadratureSpec& spec = {});

/// Integrates over [points.front(), points.back()] with forced breakpoints at every
/// interior point. Points must be strictly increasing; only the ends may be infinite.
QuadratureResult integrate(const ComplexIntegrand& f, std::span<const double> points,
                           const QuadratureSpec& spec = {});

RealQuadratureResult integrate_real(const RealFunction& f, double a, double b,
                                    const QuadratureSpec& spec = {});
RealQuadratureResult integrate_real(const RealFunction& f, std::span<const double> points,
                                    const QuadratureSpec& spec = {});

struct RootSpec {
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double tol = 1e-12;
    int max_iterations = 200;

    void validate() const;
};

/// Brent's method on a sign-changing bracket. On return the final bracket is no wider
/// than tol + 4*eps*|x|. Throws NoSignChange, NonConvergence, DomainError (NaN values).
double find_root(const RealFunction& f, const RootSpec& spec);

/// e^z - 1 without cancellation for small |z|.
Complex expm1(Complex z);

} // namespace zeno::numerics

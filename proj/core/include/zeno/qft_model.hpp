#pragma once

// Scalar S coupled to two identical scalars phi through g S phi^2, at one loop with a
// sharp three-momentum cutoff |q| <= L on the vertex.
//
//   Sigma(x^2) = Int_{|q|<L} d^3q/(2pi)^3 1 / (w (4 w^2 - x^2 - i0)),  w = sqrt(q^2 + m^2)
//   Pi = 2 g^2 Sigma,  G_S(x^2) = 1 / (x^2 - M0^2 + Pi(x^2))
//
// Im Sigma >= 0 and is nonzero only for 2m < x < 2 sqrt(L^2 + m^2).

#include <complex>
#include <span>
#include <vector>

namespace zeno::qft {

using Complex = std::complex<double>;

struct QftModel {
    double bare_mass = 1.0;     ///< M0
    double product_mass = 0.0;  ///< m
    double coupling = 0.1;      ///< g, mass dimension one
    double cutoff = 1.0;        ///< L

    void validate() const;
    double threshold() const { return 2.0 * product_mass; }
    /// Largest x at which the two-particle channel is open below the cutoff.
    double cutoff_edge() const;
    bool operator==(const QftModel&) const = default;
};

struct LoopSelfEnergy {
    double re = 0.0;
    double im = 0.0;

    Complex value() const { return {re, im}; }
};

/// Throws ThresholdPoint at x = 2m or x = cutoff_edge() (within 1e-12 relative).
LoopSelfEnergy loop_self_energy(const QftModel& model, double x);

/// Pi = 2 g^2 Sigma.
LoopSelfEnergy polarization(const QftModel& model, double x);

double tree_level_width(const QftModel& model, double x);

/// Zero of s - M0^2 + Re Pi(s) on (0, 2 M0^2]. Throws NoSignChange.
double renormalized_mass_sq(const QftModel& model);

struct Resonance {
    double mass = 0.0;
    double width = 0.0;  ///< tree-level width at the renormalized mass
};

Resonance resonance(const QftModel& model);

struct BwPair {
    Complex relativistic;     ///< 1 / (x^2 - M^2 + i M Gamma)
    Complex nonrelativistic;  ///< (1/2M) / (x - M + i Gamma/2)
};

BwPair bw_propagators(const Resonance& res, double x);

/// Full one-loop propagator.
Complex propagator(const QftModel& model, double x);

/// -(1/pi) Im G_S(x^2).
double spectral_function(const QftModel& model, double x);

} // namespace zeno::qft

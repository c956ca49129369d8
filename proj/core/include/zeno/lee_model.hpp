#pragma once

// Lee Hamiltonian with linear dispersion w(k) = k and a flat form factor that couples
// the discrete state |S> to the continuum only inside [c - L, c + L].
//
// Self-energy convention: G_S(E) = 1 / (E - M0 + g^2 Sigma(E)) with
//   Sigma(E) = -Int dk/(2 pi) f^2(k) / (E - k + i0)
//            = -(1/2pi) ln|(E - c + L)/(E - c - L)| + (i/2) theta(window).
// Besides the cut on the window, G_S has two real poles (bound states), one above and
// one below the window; they carry the spectral weight missing from the cut.

#include "zeno/numerics.hpp"

#include <array>
#include <complex>
#include <optional>
#include <vector>

namespace zeno::lee {

using Complex = std::complex<double>;

class CutoffLeeModel {
public:
    /// window_center defaults to bare_mass (the symmetric window).
    CutoffLeeModel(double bare_mass, double half_width, double coupling,
                   std::optional<double> window_center = std::nullopt);

    double bare_mass() const noexcept { return bare_mass_; }
    double half_width() const noexcept { return half_width_; }
    double coupling() const noexcept { return coupling_; }
    double window_center() const noexcept { return window_center_; }
    double window_lo() const noexcept { return window_center_ - half_width_; }
    double window_hi() const noexcept { return window_center_ + half_width_; }

    /// Distance from a window edge below which Sigma is treated as singular.
    double branch_guard() const noexcept { return 1e-12 * half_width_; }

    bool inside_window(double energy) const noexcept {
        return energy > window_lo() && energy < window_hi();
    }

    bool operator==(const CutoffLeeModel&) const = default;

private:
    double bare_mass_;
    double half_width_;
    double coupling_;
    double window_center_;
};

struct ComplexSelfEnergy {
    double re = 0.0;
    double im = 0.0;

    Complex value() const { return {re, im}; }
};

struct SpectralSample {
    double energy = 0.0;
    double density = 0.0;
};

/// Real pole of G_S outside the coupling window.
struct BoundState {
    double energy = 0.0;
    double weight = 0.0;
};

/// Throws BranchPoint within branch_guard() of a window edge.
ComplexSelfEnergy self_energy(const CutoffLeeModel& model, double energy);

/// d Re Sigma / dE, analytic.
double self_energy_slope(const CutoffLeeModel& model, double energy);

Complex propagator(const CutoffLeeModel& model, double energy);

/// Resonance position: zero of E - M0 + g^2 Re Sigma(E) inside the window. By default the
/// bracket is the part of the window where that function increases, which excludes the
/// two zeros hugging the edges. Throws NoSignChange.
double renormalized_mass(const CutoffLeeModel& model,
                         std::optional<numerics::RootSpec> bracket = std::nullopt);

/// Breit-Wigner width g^2 f^2(k_M) / (1 + g^2 Re Sigma'(M)); 0 if M lies outside the
/// window. Throws DomainError if the denominator is not positive.
double bw_width(const CutoffLeeModel& model);

/// Continuous part of -(1/pi) Im G_S(E); zero outside the window and inside the branch guard.
double spectral_density(const CutoffLeeModel& model, double energy);

/// Poles above (index 0) and below (index 1) the window with their residues.
std::array<BoundState, 2> bound_states(const CutoffLeeModel& model);

std::vector<SpectralSample> sample_spectral_density(const CutoffLeeModel& model, double lo,
                                                    double hi, std::size_t count);

/// Integral of the continuous density over the window plus both pole weights.
double spectral_weight(const CutoffLeeModel& model, const numerics::QuadratureSpec& spec = {});

/// a(t) = <S| e^{-iHt} |S> from the spectral representation. Requires t >= 0.
Complex survival_amplitude(const CutoffLeeModel& model, double t,
                           const numerics::QuadratureSpec& spec = {});

double survival_probability(const CutoffLeeModel& model, double t,
                            const numerics::QuadratureSpec& spec = {});

/// (<H^2> - <H>^2)^{-1/2} in |S>, which for the flat window is sqrt(pi / (g^2 L)).
double zeno_time(const CutoffLeeModel& model);

} // namespace zeno::lee

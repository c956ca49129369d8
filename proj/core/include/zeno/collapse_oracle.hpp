#pragma once

// Brute-force check of the pulsed-measurement formulas. The continuum is replaced by a
// cell-centered momentum lattice; every node is evolved with the exact exponential-limit
// kernel, and band collapses are applied node by node. Amplitude that leaks outside the
// lattice is kept analytically as a sum of shifted Lorentzian tails.
//
// Continuum modes evolve as e^{-ikt}|k> and never feed back into |S>. Evolution from
// pure |S> conserves the norm; after a band has been removed it does not, since the
// interference between fresh emission and the surviving modes no longer cancels inside
// the band. Collapses renormalize by 1/sqrt(1 - p_click) regardless.

#include "zeno/bang_bang.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace zeno::collapse {

using Complex = std::complex<double>;
using bang_bang::DetectorBand;
using bang_bang::ExponentialDecay;
using bang_bang::MeasurementSchedule;

struct KLattice {
    double k_max = 200.0;
    std::size_t n_points = std::size_t{1} << 16;

    double spacing() const { return 2.0 * k_max / static_cast<double>(n_points); }
    /// Center of cell j.
    double node(std::size_t j) const { return -k_max + (static_cast<double>(j) + 0.5) * spacing(); }
    void validate() const;
    /// Non-fatal problems, e.g. k_max < 20 max(Gamma, lambda).
    std::vector<std::string> validity_warnings(const ExponentialDecay& sys,
                                               const DetectorBand& band) const;
    bool operator==(const KLattice&) const = default;
};

/// Band edges moved to the nearest cell boundaries. Cells [first, last) are inside.
struct SnappedBand {
    std::size_t first = 0;
    std::size_t last = 0;
    bool covers_tail = false;  ///< perfect detector: the off-lattice tail is detected too
    double half_width = 0.0;
    double center = 0.0;

    DetectorBand as_band() const { return {half_width, center}; }
};

SnappedBand snap_band(const KLattice& lattice, const DetectorBand& band);

/// Off-lattice amplitude c(k) = (g/sqrt(2 pi)) / (k - M0 + i Gamma/2) * weight * e^{-i k shift}.
struct TailTerm {
    double shift = 0.0;
    Complex weight;
};

class StateVector {
public:
    /// Pure |S>.
    static StateVector excited(const KLattice& lattice, const ExponentialDecay& sys);

    const KLattice& lattice() const noexcept { return lattice_; }
    const ExponentialDecay& system() const noexcept { return sys_; }

    Complex amp_s;
    std::vector<Complex> amp_k;
    std::vector<TailTerm> tail;
    double elapsed = 0.0;  ///< time since pure |S>, collapses included

    /// |amp_S|^2 + sum |amp_k|^2 dk + tail norm, recomputed.
    double norm() const;
    /// sum |amp_k|^2 dk over cells [first, last)
    double lattice_norm(std::size_t first, std::size_t last) const;
    double tail_norm() const;
    double cached_norm() const noexcept { return cached_norm_; }
    void refresh_norm() { cached_norm_ = norm(); }

private:
    StateVector(const KLattice& lattice, const ExponentialDecay& sys);

    KLattice lattice_;
    ExponentialDecay sys_;
    double cached_norm_ = 1.0;
};

/// Norm of the tail terms, Int_{|k| > k_max} |c(k)|^2 dk.
double off_lattice_norm(const KLattice& lattice, const ExponentialDecay& sys,
                        std::span<const TailTerm> tail);

/// Norm of e^{-iH t}|S> on the lattice (plus exact tail) minus one. Pure quadrature error
/// of the lattice sum; it grows once dk * t approaches pi and the packet aliases.
double emission_norm_defect(const KLattice& lattice, const ExponentialDecay& sys, double t);

/// Tolerated |emission_norm_defect| at the elapsed time of a state.
inline constexpr double kNormDriftTolerance = 1e-6;

/// Exact free evolution over dt. Throws NormLoss if the lattice cannot resolve the packet
/// emitted since the state was pure |S>, i.e. |emission_norm_defect(elapsed)| exceeds
/// kNormDriftTolerance.
StateVector evolve_free(StateVector state, const ExponentialDecay& sys, double dt);

enum class Outcome { no_click, click };

struct Collapse {
    Outcome outcome = Outcome::no_click;
    StateVector posterior;
    double p_click = 0.0;
};

/// Projects onto the requested branch. Throws DegenerateCollapse if the no-click branch
/// has probability below 1e-14, or DomainError if a click is requested with p_click = 0.
Collapse measure_collapse(const StateVector& state, const SnappedBand& band, Outcome branch);

/// Sum of |amp_k|^2 dk over the band (plus the tail for a perfect detector).
double click_probability(const StateVector& state, const SnappedBand& band);

/// Samples the branch with u = (rng() >> 11) * 2^-53 and clicks iff u < p_click.
template <class Rng>
Collapse measure_collapse(const StateVector& state, const SnappedBand& band, Rng& rng) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double p = click_probability(state, band);
    return measure_collapse(state, band, u < p ? Outcome::click : Outcome::no_click);
}

struct DeterministicRun {
    SnappedBand band;
    std::vector<double> click_given_survival;  ///< q_m: click at pulse m given none before
    std::vector<double> no_click;              ///< product of (1 - q_j) through pulse m
    double max_norm_drift = 0.0;               ///< largest |emission_norm_defect| over the pulses
};

/// Follows the no-click branch through all pulses.
DeterministicRun run_deterministic(const ExponentialDecay& sys, const DetectorBand& band,
                                   const MeasurementSchedule& schedule, const KLattice& lattice);

struct RunManifest {
    std::uint64_t seed = 0;
    std::string generator = "mt19937_64";
    KLattice lattice;
    ExponentialDecay system;
    MeasurementSchedule schedule;
    DetectorBand requested_band;
    double snapped_half_width = 0.0;
    long trials = 0;
};

struct TrajectoryStats {
    RunManifest manifest;
    std::vector<long> histogram;   ///< first click at pulse m (index m-1); last entry: never clicked
    std::vector<double> no_click;  ///< fraction of trials without a click through pulse m
};

TrajectoryStats run_sampled(const ExponentialDecay& sys, const DetectorBand& band,
                            const MeasurementSchedule& schedule, const KLattice& lattice,
                            long trials, std::uint64_t seed);

std::string to_json(const TrajectoryStats& stats);

/// Norm of the state after one no-click collapse at tau and a further free evolution t',
/// split as |N|^2 [p(tau) p(t') + p(tau) w(t')] (closed forms at the snapped band) plus the
/// remaining weight X(t') read off the lattice and tail.
struct NormIdentitySample {
    double t_prime = 0.0;
    double closed_part = 0.0;
    double lattice_part = 0.0;
    double total() const { return closed_part + lattice_part; }
};

std::vector<NormIdentitySample> post_collapse_norm(const ExponentialDecay& sys,
                                                   const DetectorBand& band, double tau,
                                                   const KLattice& lattice,
                                                   const std::vector<double>& t_primes);

} // namespace zeno::collapse

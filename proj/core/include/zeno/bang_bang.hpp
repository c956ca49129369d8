#pragma once

// Exponentially decaying state observed by ideal projective measurements at equal
// intervals with a detector that only registers decay products in an energy band.
//
// With M0 the bare energy and Gamma = g^2 the width, e^{-iHt}|S> = e^{-i(M0 - i Gamma/2)t}|S>
// + Int dk b(k,t)|k>. A measurement at tau clicks with probability w = Int_band |b(k,tau)|^2,
// and the probability of no click up to t = n tau is 1 - w (1 - e^{-Gamma t}) / (1 - e^{-Gamma tau}).

#include "zeno/numerics.hpp"

#include <complex>
#include <span>
#include <vector>

namespace zeno::bang_bang {

using Complex = std::complex<double>;

struct ExponentialDecay {
    double width = 1.0;      ///< Gamma
    double bare_mass = 0.0;  ///< M0

    double coupling() const;
    void validate() const;
    bool operator==(const ExponentialDecay&) const = default;
};

/// Detector registers |k> iff |k - center| <= half_width. half_width may be +infinity.
struct DetectorBand {
    double half_width = 0.0;
    double center = 0.0;

    double lo() const { return center - half_width; }
    double hi() const { return center + half_width; }
    bool perfect() const;
    void validate() const;
    bool operator==(const DetectorBand&) const = default;
};

struct MeasurementSchedule {
    double interval = 1.0;  ///< tau
    int pulses = 1;         ///< n

    double total_time() const { return interval * pulses; }
    void validate() const;
    bool operator==(const MeasurementSchedule&) const = default;
};

struct ClickRecord {
    std::vector<double> per_step;            ///< probability that the first click happens at pulse m
    std::vector<double> cumulative_no_click; ///< probability of no click through pulse m
};

/// b(k, t). Uses a cancellation-free form so that small t is accurate.
Complex mode_amplitude(const ExponentialDecay& sys, double k, double t);

/// |b(k, t)|^2 in closed form.
double mode_density(const ExponentialDecay& sys, double k, double t);

/// w_lambda(tau). A perfect (infinite) band returns 1 - e^{-Gamma tau} directly.
double band_click_probability(const ExponentialDecay& sys, const DetectorBand& band, double tau,
                              const numerics::QuadratureSpec& spec = {});

/// p(tau)^{m-1} w_lambda(tau).
double click_probability_at_step(const ExponentialDecay& sys, const DetectorBand& band,
                                 const MeasurementSchedule& schedule, int step);

/// Same, from a precomputed w_lambda(tau).
double click_probability_at_step(const ExponentialDecay& sys, double band_probability,
                                 double interval, int step);

/// Closed-form no-click probability after n pulses of interval tau.
double no_click_closed_form(const ExponentialDecay& sys, double band_probability, double interval,
                            int pulses);

/// Per-pulse click and cumulative no-click probabilities. Throws BandTooEffective if the
/// computed w exceeds 1 - e^{-Gamma tau} beyond its quadrature error.
ClickRecord no_click_probability(const ExponentialDecay& sys, const DetectorBand& band,
                                 const MeasurementSchedule& schedule,
                                 const numerics::QuadratureSpec& spec = {});

/// Same, from a precomputed w. Throws BandTooEffective if w > 1 - e^{-Gamma tau}.
ClickRecord click_record(const ExponentialDecay& sys, double band_probability,
                         const MeasurementSchedule& schedule);

/// Late-time limit 1 - w / (1 - e^{-Gamma tau}).
double saturation_value(const ExponentialDecay& sys, const DetectorBand& band, double interval,
                        const numerics::QuadratureSpec& spec = {});

struct FreezePoint {
    double interval = 0.0;
    int pulses = 0;
    double time = 0.0;  ///< pulses * interval, the time actually reached
    double no_click = 0.0;
};

/// No-click probability at (approximately) t_total for each interval; pulses = round(t_total/tau).
std::vector<FreezePoint> zeno_freeze_curve(const ExponentialDecay& sys, const DetectorBand& band,
                                           double total_time, std::span<const double> intervals,
                                           const numerics::QuadratureSpec& spec = {});

/// Continuous-measurement strength matched to a pulse interval, sigma = 4 / tau.
double schulman_sigma(double interval);

/// Band half-width (centered on M0) for which the no-click probability at t = n tau
/// equals target. Throws NoSignChange if the target is unreachable.
double band_for_no_click_target(const ExponentialDecay& sys, const MeasurementSchedule& schedule,
                                double target);

} // namespace zeno::bang_bang

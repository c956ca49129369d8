#include "zeno/bang_bang.hpp"

#include "zeno/errors.hpp"
#include "zeno/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace zeno::bang_bang {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Beyond this many oscillation periods inside the band, integrate the complement instead.
constexpr double kMaxBandPeriods = 65536.0;

double decayed_fraction(const ExponentialDecay& sys, double t) { return -std::expm1(-sys.width * t); }

struct BandIntegral {
    double value;
    double error;
};

// Int_X^inf |b(M0 + x, tau)|^2 dx for X tau >> 1. The non-oscillating part is exact; the
// cos(x tau) part is the integration-by-parts series through g'' with g = 1/(x^2 + a^2).
BandIntegral outside_tail(const ExponentialDecay& sys, double x, double tau) {
    const double a = 0.5 * sys.width;
    const double decay = std::exp(-a * tau);
    const double smooth = (1.0 + decay * decay) / a * std::atan(a / x);
    const double q = x * x + a * a;
    const double g0 = 1.0 / q;
    const double g1 = -2.0 * x / (q * q);
    const double g2 = (6.0 * x * x - 2.0 * a * a) / (q * q * q);
    const double s = std::sin(x * tau);
    const double c = std::cos(x * tau);
    const double oscillating = -s * g0 / tau - c * g1 / (tau * tau) + s * g2 / (tau * tau * tau);
    // remainder bounded by Int |g'''| / tau^3 = |g''(X)| / tau^3
    const double scale = sys.width / (2.0 * kPi);
    const double error = scale * 2.0 * decay * std::abs(g2) / (tau * tau * tau);
    return {scale * (smooth - 2.0 * decay * oscillating), error};
}

BandIntegral band_integral(const ExponentialDecay& sys, const DetectorBand& band, double tau,
                           const numerics::QuadratureSpec& spec) {
    sys.validate();
    band.validate();
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("band click probability: tau must be >= 0");
    if (tau == 0.0 || band.half_width == 0.0) return {0.0, 0.0};
    const double total = decayed_fraction(sys, tau);
    if (band.perfect()) return {total, 0.0};

    auto density = [&](double k) { return mode_density(sys, k, tau); };
    numerics::QuadratureSpec local = spec;
    if (!local.oscillatory_hint) local.oscillatory_hint = tau;

    const double periods = 2.0 * band.half_width * tau / (2.0 * kPi);
    if (periods <= kMaxBandPeriods) {
        std::vector<double> pts{band.lo(), band.hi()};
        if (sys.bare_mass > band.lo() && sys.bare_mass < band.hi()) {
            pts.insert(pts.begin() + 1, sys.bare_mass);
        }
        const auto r = numerics::integrate_real(density, pts, local);
        return {r.value, r.error};
    }
    const double x_hi = band.hi() - sys.bare_mass;
    const double x_lo = sys.bare_mass - band.lo();
    if (x_hi * tau > 1e3 && x_lo * tau > 1e3) {
        const auto upper = outside_tail(sys, x_hi, tau);
        const auto lower = outside_tail(sys, x_lo, tau);
        return {total - upper.value - lower.value, upper.error + lower.error};
    }
    const auto upper = numerics::integrate_real(density, band.hi(), kInf, local);
    const auto lower = numerics::integrate_real(density, -kInf, band.lo(), local);
    return {total - upper.value - lower.value, upper.error + lower.error};
}

} // namespace

double ExponentialDecay::coupling() const { return std::sqrt(width); }

void ExponentialDecay::validate() const {
    if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("ExponentialDecay: Gamma must be finite and > 0");
    if (!std::isfinite(bare_mass)) throw DomainError("ExponentialDecay: M0 must be finite");
}

bool DetectorBand::perfect() const { return std::isinf(half_width); }

void DetectorBand::validate() const {
    if (!(half_width >= 0.0)) throw DomainError("DetectorBand: lambda must be >= 0");
    if (!std::isfinite(center)) throw DomainError("DetectorBand: center must be finite");
}

void MeasurementSchedule::validate() const {
    if (!(interval > 0.0) || !std::isfinite(interval)) {
        throw DomainError("MeasurementSchedule: tau must be finite and > 0");
    }
    if (pulses < 1) throw DomainError("MeasurementSchedule: pulse count must be >= 1");
}

Complex mode_amplitude(const ExponentialDecay& sys, double k, double t) {
    if (!(t >= 0.0)) throw DomainError("mode_amplitude: t must be >= 0");
    const Complex detuning(k - sys.bare_mass, 0.5 * sys.width);
    // e^{-ikt} - e^{-i(M0 - i Gamma/2)t} = -e^{-ikt} (e^{i detuning t} - 1)
    const Complex numerator = -std::polar(1.0, -k * t) * numerics::expm1(Complex(0.0, 1.0) * detuning * t);
    return sys.coupling() / std::sqrt(2.0 * kPi) * numerator / detuning;
}

double mode_density(const ExponentialDecay& sys, double k, double t) {
    const double x = k - sys.bare_mass;
    const double a = 0.5 * sys.width * t;
    const double s = std::sin(0.5 * x * t);
    const double em1 = std::expm1(-a);
    // 1 - 2 e^{-a} cos(xt) + e^{-2a}, written without cancellation
    const double numerator = em1 * em1 + 4.0 * std::exp(-a) * s * s;
    return sys.width / (2.0 * kPi) * numerator / (x * x + 0.25 * sys.width * sys.width);
}

double band_click_probability(const ExponentialDecay& sys, const DetectorBand& band, double tau,
                              const numerics::QuadratureSpec& spec) {
    return band_integral(sys, band, tau, spec).value;
}

double click_probability_at_step(const ExponentialDecay& sys, const DetectorBand& band,
                                 const MeasurementSchedule& schedule, int step) {
    schedule.validate();
    const double w = band_click_probability(sys, band, schedule.interval);
    if (step < 1 || step > schedule.pulses) throw DomainError("click_probability_at_step: need 1 <= m <= n");
    return click_probability_at_step(sys, w, schedule.interval, step);
}

double click_probability_at_step(const ExponentialDecay& sys, double band_probability,
                                 double interval, int step) {
    if (step < 1) throw DomainError("click_probability_at_step: step must be >= 1");
    return std::exp(-sys.width * interval * (step - 1)) * band_probability;
}

double no_click_closed_form(const ExponentialDecay& sys, double band_probability, double interval,
                            int pulses) {
    if (!(interval > 0.0)) throw DomainError("no_click_closed_form: tau must be > 0");
    return 1.0 - band_probability * decayed_fraction(sys, interval * pulses) /
                     decayed_fraction(sys, interval);
}

ClickRecord click_record(const ExponentialDecay& sys, double band_probability,
                         const MeasurementSchedule& schedule) {
    schedule.validate();
    if (!(band_probability >= 0.0)) throw DomainError("click_record: band probability must be >= 0");
    const double ceiling = decayed_fraction(sys, schedule.interval);
    if (band_probability > ceiling * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "band click probability " << band_probability << " exceeds total decay probability " << ceiling;
        throw BandTooEffective(msg.str());
    }
    ClickRecord out;
    out.per_step.reserve(schedule.pulses);
    out.cumulative_no_click.reserve(schedule.pulses);
    for (int m = 1; m <= schedule.pulses; ++m) {
        out.per_step.push_back(click_probability_at_step(sys, band_probability, schedule.interval, m));
        out.cumulative_no_click.push_back(
            no_click_closed_form(sys, band_probability, schedule.interval, m));
    }
    return out;
}

ClickRecord no_click_probability(const ExponentialDecay& sys, const DetectorBand& band,
                                 const MeasurementSchedule& schedule,
                                 const numerics::QuadratureSpec& spec) {
    schedule.validate();
    const auto w = band_integral(sys, band, schedule.interval, spec);
    const double ceiling = decayed_fraction(sys, schedule.interval);
    if (w.value > ceiling + std::max(w.error, 1e-14)) {
        std::ostringstream msg;
        msg << "band click probability " << w.value << " exceeds total decay probability " << ceiling;
        throw BandTooEffective(msg.str());
    }
    return click_record(sys, std::min(w.value, ceiling), schedule);
}

double saturation_value(const ExponentialDecay& sys, const DetectorBand& band, double interval,
                        const numerics::QuadratureSpec& spec) {
    if (!(interval > 0.0)) throw DomainError("saturation_value: tau must be > 0");
    const double w = band_click_probability(sys, band, interval, spec);
    return 1.0 - w / decayed_fraction(sys, interval);
}

std::vector<FreezePoint> zeno_freeze_curve(const ExponentialDecay& sys, const DetectorBand& band,
                                           double total_time, std::span<const double> intervals,
                                           const numerics::QuadratureSpec& spec) {
    if (!(total_time > 0.0)) throw DomainError("zeno_freeze_curve: total time must be > 0");
    std::vector<FreezePoint> out(intervals.size());
    parallel_for(intervals.size(), [&](std::size_t i) {
        const double tau = intervals[i];
        if (!(tau > 0.0)) throw DomainError("zeno_freeze_curve: every tau must be > 0");
        const int pulses = std::max(1, static_cast<int>(std::lround(total_time / tau)));
        const double w = band_click_probability(sys, band, tau, spec);
        out[i] = {tau, pulses, pulses * tau, no_click_closed_form(sys, w, tau, pulses)};
    });
    return out;
}

double schulman_sigma(double interval) {
    if (!(interval > 0.0)) throw DomainError("schulman_sigma: tau must be > 0");
    return 4.0 / interval;
}

double band_for_no_click_target(const ExponentialDecay& sys, const MeasurementSchedule& schedule,
                                double target) {
    sys.validate();
    schedule.validate();
    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-13;
    spec.rel_tol = 1e-11;
    auto excess = [&](double half_width) {
        const DetectorBand band{half_width, sys.bare_mass};
        const double w = band_click_probability(sys, band, schedule.interval, spec);
        return no_click_closed_form(sys, w, schedule.interval, schedule.pulses) - target;
    };
    double hi = sys.width;
    while (excess(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e6 * sys.width) {
            throw NoSignChange("band_for_no_click_target: target below the perfect-detector limit");
        }
    }
    return numerics::find_root(excess, {0.0, hi, 1e-12 * sys.width, 200});
}

} // namespace zeno::bang_bang

#include "zeno/qft_model.hpp"

#include "zeno/errors.hpp"
#include "zeno/numerics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace zeno::qft {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEdgeGuard = 1e-12;

numerics::QuadratureSpec loop_spec() {
    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-14;
    spec.rel_tol = 1e-12;
    return spec;
}

} // namespace

void QftModel::validate() const {
    if (!(bare_mass > 0.0) || !std::isfinite(bare_mass)) throw DomainError("QftModel: M0 must be finite and > 0");
    if (!(product_mass >= 0.0) || !std::isfinite(product_mass)) throw DomainError("QftModel: m must be >= 0");
    if (!(coupling > 0.0) || !std::isfinite(coupling)) throw DomainError("QftModel: g must be finite and > 0");
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw DomainError("QftModel: cutoff must be finite and > 0");
}

double QftModel::cutoff_edge() const {
    return 2.0 * std::sqrt(cutoff * cutoff + product_mass * product_mass);
}

LoopSelfEnergy loop_self_energy(const QftModel& model, double x) {
    model.validate();
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("loop_self_energy: x must be finite and >= 0");
    const double m = model.product_mass;
    const double lam = model.cutoff;
    const double scale = std::max(model.threshold(), model.cutoff_edge());
    if (std::abs(x - model.threshold()) <= kEdgeGuard * scale ||
        std::abs(x - model.cutoff_edge()) <= kEdgeGuard * scale) {
        std::ostringstream msg;
        msg << "loop self-energy evaluated at a threshold, x = " << x;
        throw ThresholdPoint(msg.str());
    }

    const double x2 = x * x;
    const double norm = 1.0 / (2.0 * kPi * kPi);
    LoopSelfEnergy out;
    if (x < model.threshold() || x > model.cutoff_edge()) {
        const auto r = numerics::integrate_real(
            [&](double q) {
                const double w2 = q * q + m * m;
                return q * q / (std::sqrt(w2) * (4.0 * w2 - x2));
            },
            0.0, lam, loop_spec());
        out.re = norm * r.value;
        return out;
    }

    // 4 w^2 - x^2 = 4 (q - q0)(q + q0); subtract the pole of F(q)/(q - q0).
    const double q0 = std::sqrt(0.25 * x2 - m * m);
    auto residue_factor = [&](double q) { return q * q / (4.0 * std::sqrt(q * q + m * m) * (q + q0)); };
    const double f0 = residue_factor(q0);
    const double pts[] = {0.0, q0, lam};
    const auto r = numerics::integrate_real(
        [&](double q) { return (residue_factor(q) - f0) / (q - q0); }, pts, loop_spec());
    out.re = norm * (r.value + f0 * std::log((lam - q0) / q0));
    out.im = q0 / (8.0 * kPi * x);
    return out;
}

LoopSelfEnergy polarization(const QftModel& model, double x) {
    const auto s = loop_self_energy(model, x);
    const double c = 2.0 * model.coupling * model.coupling;
    return {c * s.re, c * s.im};
}

double tree_level_width(const QftModel& model, double x) {
    model.validate();
    if (!(x > 0.0)) throw DomainError("tree_level_width: x must be > 0");
    if (x <= model.threshold()) return 0.0;
    const double m = model.product_mass;
    const double q0 = std::sqrt(0.25 * x * x - m * m);
    return q0 / (8.0 * kPi * x * x) * 2.0 * model.coupling * model.coupling;
}

double renormalized_mass_sq(const QftModel& model) {
    model.validate();
    const double m02 = model.bare_mass * model.bare_mass;
    auto gap = [&](double s) { return s - m02 + polarization(model, std::sqrt(s)).re; };
    const double lo = model.product_mass > 0.0 ? 0.0 : 1e-12 * m02;
    return numerics::find_root(gap, {lo, 2.0 * m02, 1e-14 * m02, 200});
}

Resonance resonance(const QftModel& model) {
    const double mass = std::sqrt(renormalized_mass_sq(model));
    return {mass, tree_level_width(model, mass)};
}

BwPair bw_propagators(const Resonance& res, double x) {
    if (!(res.mass > 0.0) || !(res.width >= 0.0)) throw DomainError("bw_propagators: need M > 0 and Gamma >= 0");
    const double m = res.mass;
    return {1.0 / Complex(x * x - m * m, m * res.width),
            (0.5 / m) / Complex(x - m, 0.5 * res.width)};
}

Complex propagator(const QftModel& model, double x) {
    const auto pi = polarization(model, x);
    return 1.0 / Complex(x * x - model.bare_mass * model.bare_mass + pi.re, pi.im);
}

double spectral_function(const QftModel& model, double x) {
    return -propagator(model, x).imag() / kPi;
}

} // namespace zeno::qft

#include "zeno/lee_model.hpp"

#include "zeno/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace zeno::lee {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLowestLogDistance = -1e6;

// E - M0 + g^2 Re Sigma(E), the real part of the inverse propagator.
double inverse_real(const CutoffLeeModel& m, double energy) {
    return energy - m.bare_mass() + m.coupling() * m.coupling() * self_energy(m, energy).re;
}

// Residue of a pole at distance d outside the window: 1 / (1 + g^2 Re Sigma').
double pole_weight(const CutoffLeeModel& m, double d) {
    const double g2 = m.coupling() * m.coupling();
    const double lam = m.half_width();
    const double span = d * (2.0 * lam + d);
    return span / (span + g2 * lam / kPi);
}

// Finds u with h(u) = 0 where h is monotone in u and h(u_top) has sign `top_sign`.
// Walks u downwards until the sign flips. Returns nullopt if no flip above the floor.
std::optional<double> log_distance_root(const std::function<double(double)>& h, double u_top) {
    const double f_top = h(u_top);
    double step = 1.0;
    double u_lo = u_top - step;
    while (u_lo > kLowestLogDistance) {
        if ((h(u_lo) > 0.0) != (f_top > 0.0)) {
            return numerics::find_root(h, {u_lo, u_top, 1e-13, 400});
        }
        step *= 2.0;
        u_lo = u_top - step;
    }
    if ((h(kLowestLogDistance) > 0.0) != (f_top > 0.0)) {
        return numerics::find_root(h, {kLowestLogDistance, u_top, 1e-13, 400});
    }
    return std::nullopt;
}

// Zeros of the inverse real part that sit inside the window next to an edge. They are
// narrow features of the density and are passed to the integrator as breakpoints.
std::vector<double> edge_features(const CutoffLeeModel& m) {
    std::vector<double> out;
    const double g2 = m.coupling() * m.coupling();
    const double lam = m.half_width();
    if (g2 >= kPi * lam) return out;
    const double reach = lam - std::sqrt(lam * lam - g2 * lam / kPi);
    if (!(reach > m.branch_guard())) return out;
    const double two_lam = 2.0 * lam;
    const double m0 = m.bare_mass();

    // Lower edge: E = lo + D. h(D -> 0) -> +inf, local minimum at D = reach.
    auto h_lo = [&](double u) {
        const double d = std::exp(u);
        return m.window_lo() + d - m0 - g2 / (2.0 * kPi) * (u - std::log(two_lam - d));
    };
    // Upper edge: E = hi - D. h(D -> 0) -> -inf, local maximum at D = reach.
    auto h_hi = [&](double u) {
        const double d = std::exp(u);
        return m.window_hi() - d - m0 + g2 / (2.0 * kPi) * (u - std::log(two_lam - d));
    };
    const double u_top = std::log(reach);
    try {
        if (h_lo(u_top) < 0.0) {
            if (auto u = log_distance_root(h_lo, u_top); u && std::exp(*u) > m.branch_guard()) {
                out.push_back(m.window_lo() + std::exp(*u));
            }
        }
        if (h_hi(u_top) > 0.0) {
            if (auto u = log_distance_root(h_hi, u_top); u && std::exp(*u) > m.branch_guard()) {
                out.push_back(m.window_hi() - std::exp(*u));
            }
        }
    } catch (const Error&) {
        // breakpoints are only hints for the integrator
    }
    return out;
}

std::vector<double> window_breakpoints(const CutoffLeeModel& m) {
    std::vector<double> pts{m.window_lo(), m.window_hi()};
    for (double e : edge_features(m)) pts.push_back(e);
    try {
        const double mass = renormalized_mass(m);
        if (m.inside_window(mass)) pts.push_back(mass);
    } catch (const Error&) {
    }
    if (m.inside_window(m.bare_mass())) pts.push_back(m.bare_mass());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](double a, double b) { return std::abs(a - b) <= m.branch_guard(); }),
              pts.end());
    return pts;
}

} // namespace

CutoffLeeModel::CutoffLeeModel(double bare_mass, double half_width, double coupling,
                               std::optional<double> window_center)
    : bare_mass_(bare_mass),
      half_width_(half_width),
      coupling_(coupling),
      window_center_(window_center.value_or(bare_mass)) {
    if (!std::isfinite(bare_mass_)) throw DomainError("CutoffLeeModel: M0 must be finite");
    if (!(half_width_ > 0.0) || !std::isfinite(half_width_)) {
        throw DomainError("CutoffLeeModel: window half-width must be finite and > 0");
    }
    if (!(coupling_ > 0.0) || !std::isfinite(coupling_)) {
        throw DomainError("CutoffLeeModel: coupling g must be finite and > 0");
    }
    if (!std::isfinite(window_center_)) throw DomainError("CutoffLeeModel: window center must be finite");
}

ComplexSelfEnergy self_energy(const CutoffLeeModel& model, double energy) {
    const double above = energy - model.window_lo();
    const double below = energy - model.window_hi();
    if (std::abs(above) <= model.branch_guard() || std::abs(below) <= model.branch_guard()) {
        std::ostringstream msg;
        msg << "self-energy branch point at E = " << energy;
        throw BranchPoint(msg.str());
    }
    ComplexSelfEnergy out;
    out.re = -(std::log(std::abs(above)) - std::log(std::abs(below))) / (2.0 * kPi);
    out.im = model.inside_window(energy) ? 0.5 : 0.0;
    return out;
}

double self_energy_slope(const CutoffLeeModel& model, double energy) {
    const double x = energy - model.window_center();
    const double lam = model.half_width();
    return lam / (kPi * (x * x - lam * lam));
}

Complex propagator(const CutoffLeeModel& model, double energy) {
    const auto sigma = self_energy(model, energy);
    const double g2 = model.coupling() * model.coupling();
    return 1.0 / Complex(energy - model.bare_mass() + g2 * sigma.re, g2 * sigma.im);
}

double renormalized_mass(const CutoffLeeModel& model, std::optional<numerics::RootSpec> bracket) {
    if (!bracket && model.window_center() == model.bare_mass()) {
        // Re Sigma is odd about the window center.
        return model.bare_mass();
    }
    numerics::RootSpec spec;
    if (bracket) {
        spec = *bracket;
    } else {
        const double g2 = model.coupling() * model.coupling();
        const double lam = model.half_width();
        const double guard = 2.0 * model.branch_guard();
        double reach = lam - guard;
        if (g2 < kPi * lam) reach = std::min(reach, std::sqrt(lam * lam - g2 * lam / kPi));
        spec.bracket_lo = model.window_center() - reach;
        spec.bracket_hi = model.window_center() + reach;
        spec.tol = 1e-14 * std::max(lam, std::abs(model.window_center()));
    }
    return numerics::find_root([&](double e) { return inverse_real(model, e); }, spec);
}

double bw_width(const CutoffLeeModel& model) {
    const double mass = renormalized_mass(model);
    if (!model.inside_window(mass)) return 0.0;
    const double g2 = model.coupling() * model.coupling();
    const double denom = 1.0 + g2 * self_energy_slope(model, mass);
    if (!(denom > 0.0)) {
        throw DomainError("Breit-Wigner width undefined: 1 + g^2 dReSigma/dE <= 0 at the resonance");
    }
    return g2 / denom;
}

double spectral_density(const CutoffLeeModel& model, double energy) {
    if (!(energy > model.window_lo() + model.branch_guard() &&
          energy < model.window_hi() - model.branch_guard())) {
        return 0.0;
    }
    const double half_g2 = 0.5 * model.coupling() * model.coupling();
    const double h = inverse_real(model, energy);
    return half_g2 / (kPi * (h * h + half_g2 * half_g2));
}

std::array<BoundState, 2> bound_states(const CutoffLeeModel& model) {
    const double g2 = model.coupling() * model.coupling();
    const double lam = model.half_width();
    const double two_lam = 2.0 * lam;
    const double m0 = model.bare_mass();
    std::array<BoundState, 2> out{BoundState{model.window_hi(), 0.0}, BoundState{model.window_lo(), 0.0}};

    // Above: E = hi + D, increasing in u = ln D.
    auto h_up = [&](double u) {
        const double d = std::exp(u);
        return model.window_hi() + d - m0 - g2 / (2.0 * kPi) * (std::log(two_lam + d) - u);
    };
    const double d_up = std::abs(model.window_hi() - m0) + lam + g2 + 1.0;
    if (auto u = log_distance_root(h_up, std::log(d_up))) {
        const double d = std::exp(*u);
        out[0] = {model.window_hi() + d, pole_weight(model, d)};
    }

    // Below: E = lo - D, decreasing in u = ln D.
    auto h_down = [&](double u) {
        const double d = std::exp(u);
        return model.window_lo() - d - m0 + g2 / (2.0 * kPi) * (std::log(two_lam + d) - u);
    };
    const double d_down = std::abs(model.window_lo() - m0) + lam + g2 + 1.0;
    if (auto u = log_distance_root(h_down, std::log(d_down))) {
        const double d = std::exp(*u);
        out[1] = {model.window_lo() - d, pole_weight(model, d)};
    }
    return out;
}

std::vector<SpectralSample> sample_spectral_density(const CutoffLeeModel& model, double lo,
                                                    double hi, std::size_t count) {
    if (!(lo < hi) || count < 2) throw DomainError("sample_spectral_density: need lo < hi and count >= 2");
    std::vector<SpectralSample> out(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double e = lo + step * static_cast<double>(i);
        out[i] = {e, spectral_density(model, e)};
    }
    return out;
}

double spectral_weight(const CutoffLeeModel& model, const numerics::QuadratureSpec& spec) {
    const auto pts = window_breakpoints(model);
    const auto cut = numerics::integrate_real([&](double e) { return spectral_density(model, e); },
                                              pts, spec);
    const auto poles = bound_states(model);
    return cut.value + poles[0].weight + poles[1].weight;
}

Complex survival_amplitude(const CutoffLeeModel& model, double t, const numerics::QuadratureSpec& spec) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("survival_amplitude: t must be finite and >= 0");
    const double m0 = model.bare_mass();
    numerics::QuadratureSpec local = spec;
    if (!local.oscillatory_hint && t > 0.0) local.oscillatory_hint = t;

    const auto pts = window_breakpoints(model);
    const auto cut = numerics::integrate(
        [&](double e) { return spectral_density(model, e) * std::polar(1.0, -(e - m0) * t); }, pts,
        local);
    Complex amp = cut.value;
    for (const auto& pole : bound_states(model)) {
        amp += pole.weight * std::polar(1.0, -(pole.energy - m0) * t);
    }
    return amp * std::polar(1.0, -m0 * t);
}

double survival_probability(const CutoffLeeModel& model, double t, const numerics::QuadratureSpec& spec) {
    return std::norm(survival_amplitude(model, t, spec));
}

double zeno_time(const CutoffLeeModel& model) {
    const double g2 = model.coupling() * model.coupling();
    return std::sqrt(kPi / (g2 * model.half_width()));
}

} // namespace zeno::lee

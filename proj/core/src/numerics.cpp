#include "zeno/numerics.hpp"

#include "zeno/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

namespace zeno::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod 15-point abscissae (descending) and weights; Gauss 7-point weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kMaxPanels = 1 << 20;
constexpr int kTailStartPeriods = 32;
constexpr int kTailMaxLevels = 13;

struct Interval {
    double a;
    double b;
    int piece;
    Complex value;
    double error;
};

struct ByError {
    bool operator()(const Interval& l, const Interval& r) const { return l.error < r.error; }
};

Interval gauss_kronrod(const ComplexIntegrand& f, double a, double b, int piece, long& evals) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    Complex fv1[7];
    Complex fv2[7];
    const Complex fc = f(centre);
    Complex resg = fc * kWg[3];
    Complex resk = fc * kWgk[7];
    double resabs = std::abs(fc) * kWgk[7];

    for (int j = 0; j < 3; ++j) {
        const int jtw = 2 * j + 1;
        const double dx = half * kXgk[jtw];
        const Complex f1 = f(centre - dx);
        const Complex f2 = f(centre + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 4; ++j) {
        const int jtwm1 = 2 * j;
        const double dx = half * kXgk[jtwm1];
        const Complex f1 = f(centre - dx);
        const Complex f2 = f(centre + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    evals += 15;

    const Complex reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }

    const double scale = std::abs(half);
    resasc *= scale;
    resabs *= scale;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) {
        err = std::max(50.0 * kEps * resabs, err);
    }
    if (!std::isfinite(resk.real()) || !std::isfinite(resk.imag())) {
        throw DomainError("integrand is not finite on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]");
    }
    return {a, b, piece, resk * half, err};
}

// Globally adaptive refinement over an initial partition. Each interval refers to the
// integrand pieces[piece], which allows mapped and unmapped segments in one run.
QuadratureResult adaptive(std::span<const ComplexIntegrand> pieces, std::vector<Interval> initial,
                          double abs_tol, double rel_tol, int budget) {
    long evals = 0;
    std::priority_queue<Interval, std::vector<Interval>, ByError> heap;
    std::vector<Interval> frozen;

    for (const auto& iv : initial) {
        heap.push(gauss_kronrod(pieces[iv.piece], iv.a, iv.b, iv.piece, evals));
    }

    auto totals = [&]() {
        Complex value{};
        double error = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
        for (const auto& iv : frozen) {
            value += iv.value;
            error += iv.error;
        }
        return std::pair{value, error};
    };

    auto [value, error] = totals();
    int bisections = 0;
    int since_resum = 0;
    while (true) {
        const double tol = std::max(abs_tol, rel_tol * std::abs(value));
        if (error <= tol) {
            std::tie(value, error) = totals();
            if (error <= std::max(abs_tol, rel_tol * std::abs(value))) {
                break;
            }
        }
        if (heap.empty() || bisections >= budget) {
            std::ostringstream msg;
            msg << "quadrature did not converge: error estimate " << error << " exceeds tolerance "
                << std::max(abs_tol, rel_tol * std::abs(value)) << " after " << bisections
                << " subdivisions";
            throw NonConvergence(msg.str());
        }

        Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const double width = worst.b - worst.a;
        if (!(mid > worst.a && mid < worst.b) ||
            width <= 8.0 * kEps * std::max(std::abs(worst.a), std::abs(worst.b))) {
            frozen.push_back(worst);
            continue;
        }
        const Interval left = gauss_kronrod(pieces[worst.piece], worst.a, mid, worst.piece, evals);
        const Interval right = gauss_kronrod(pieces[worst.piece], mid, worst.b, worst.piece, evals);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++bisections;
        if (++since_resum == 256) {
            std::tie(value, error) = totals();
            since_resum = 0;
        }
    }
    return {value, error, evals};
}

void append_panels(std::vector<Interval>& out, double a, double b, int piece,
                   std::optional<double> hint, long& panel_budget) {
    long panels = 1;
    if (hint && *hint > 0.0) {
        const double period = 2.0 * std::numbers::pi / *hint;
        panels = static_cast<long>(std::ceil((b - a) / period));
        panels = std::clamp<long>(panels, 1, std::max<long>(1, panel_budget));
    }
    panel_budget -= panels;
    const double step = (b - a) / static_cast<double>(panels);
    for (long j = 0; j < panels; ++j) {
        const double lo = a + step * static_cast<double>(j);
        const double hi = (j + 1 == panels) ? b : a + step * static_cast<double>(j + 1);
        out.push_back({lo, hi, piece, {}, 0.0});
    }
}

// Integral of f over [start, +inf) for an oscillatory integrand with angular frequency
// omega: whole periods out to X_j = start + 32*2^j periods, then Richardson in 1/X.
QuadratureResult oscillatory_tail(const ComplexIntegrand& f, double start, double omega,
                                  double tol, int budget) {
    const double period = 2.0 * std::numbers::pi / omega;
    const std::vector<ComplexIntegrand> pieces{f};
    const double segment_tol = 0.05 * tol;

    std::vector<std::vector<Complex>> table;
    Complex partial{};
    double quad_error = 0.0;
    long evals = 0;
    long done_periods = 0;

    for (int level = 0; level <= kTailMaxLevels; ++level) {
        const long target_periods = static_cast<long>(kTailStartPeriods) << level;
        std::vector<Interval> initial;
        initial.reserve(static_cast<std::size_t>(target_periods - done_periods));
        for (long j = done_periods; j < target_periods; ++j) {
            initial.push_back({start + period * static_cast<double>(j),
                               start + period * static_cast<double>(j + 1), 0, {}, 0.0});
        }
        const auto seg = adaptive(pieces, std::move(initial), segment_tol, 0.0, budget);
        partial += seg.value;
        quad_error += seg.error;
        evals += seg.evaluations;
        done_periods = target_periods;

        std::vector<Complex> row{partial};
        double factor = 1.0;
        for (int k = 1; k <= level; ++k) {
            factor *= 2.0;
            const Complex prev = table[level - 1][k - 1];
            row.push_back(row[k - 1] + (row[k - 1] - prev) / (factor - 1.0));
        }
        table.push_back(std::move(row));

        if (level >= 2) {
            const Complex est = table[level][level];
            const double change = std::abs(est - table[level - 1][level - 1]);
            if (change + quad_error <= tol) {
                return {est, change + quad_error, evals};
            }
        }
    }
    std::ostringstream msg;
    msg << "oscillatory tail extrapolation did not converge within "
        << (static_cast<long>(kTailStartPeriods) << kTailMaxLevels) << " periods";
    throw NonConvergence(msg.str());
}

} // namespace

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("QuadratureSpec: abs_tol must be > 0");
    if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be > 0");
    if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
    if (oscillatory_hint && !(*oscillatory_hint >= 0.0 && std::isfinite(*oscillatory_hint))) {
        throw DomainError("QuadratureSpec: oscillatory_hint must be finite and >= 0");
    }
}

QuadratureResult integrate(const ComplexIntegrand& f, double a, double b, const QuadratureSpec& spec) {
    const double points[2] = {a, b};
    return integrate(f, std::span<const double>(points), spec);
}

QuadratureResult integrate(const ComplexIntegrand& f, std::span<const double> points,
                           const QuadratureSpec& spec) {
    spec.validate();
    if (points.size() < 2) throw DomainError("integrate: need at least two points");
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (std::isnan(points[i]) || std::isnan(points[i + 1]) || !(points[i] < points[i + 1])) {
            throw DomainError("integrate: limits must be strictly increasing (a < b)");
        }
    }
    for (std::size_t i = 1; i + 1 < points.size(); ++i) {
        if (!std::isfinite(points[i])) throw DomainError("integrate: interior breakpoints must be finite");
    }

    const double lo = points.front();
    const double hi = points.back();
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);

    // Finite core between the (finite) first and last breakpoints.
    std::vector<double> core(points.begin(), points.end());
    if (lo_inf) core.erase(core.begin());
    if (hi_inf) core.pop_back();
    if (core.empty()) core.push_back(0.0);

    const bool oscillatory = spec.oscillatory_hint && *spec.oscillatory_hint > 0.0;
    const double total_tol_floor = spec.abs_tol;

    QuadratureResult tails{};
    int tail_count = (lo_inf ? 1 : 0) + (hi_inf ? 1 : 0);
    std::vector<ComplexIntegrand> pieces{f};
    std::vector<Interval> initial;
    long panel_budget = kMaxPanels;
    for (std::size_t i = 0; i + 1 < core.size(); ++i) {
        append_panels(initial, core[i], core[i + 1], 0, spec.oscillatory_hint, panel_budget);
    }

    if (tail_count > 0 && oscillatory) {
        const double omega = *spec.oscillatory_hint;
        const double tail_tol = 0.25 * total_tol_floor;
        if (hi_inf) {
            const auto r = oscillatory_tail(f, core.back(), omega, tail_tol, spec.max_subdivisions);
            tails.value += r.value;
            tails.error += r.error;
            tails.evaluations += r.evaluations;
        }
        if (lo_inf) {
            const double start = core.front();
            auto reflected = [&f, start](double y) { return f(2.0 * start - y); };
            const auto r = oscillatory_tail(reflected, start, omega, tail_tol, spec.max_subdivisions);
            tails.value += r.value;
            tails.error += r.error;
            tails.evaluations += r.evaluations;
        }
    } else if (tail_count > 0) {
        if (hi_inf) {
            const double start = core.back();
            pieces.emplace_back([&f, start](double t) -> Complex {
                const double s = 1.0 - t;
                return f(start + t / s) / (s * s);
            });
            initial.push_back({0.0, 1.0, static_cast<int>(pieces.size() - 1), {}, 0.0});
        }
        if (lo_inf) {
            const double start = core.front();
            pieces.emplace_back([&f, start](double t) -> Complex {
                const double s = 1.0 - t;
                return f(start - t / s) / (s * s);
            });
            initial.push_back({0.0, 1.0, static_cast<int>(pieces.size() - 1), {}, 0.0});
        }
    }

    QuadratureResult body{};
    if (!initial.empty()) {
        const double abs_tol = tails.evaluations > 0 ? 0.5 * spec.abs_tol : spec.abs_tol;
        body = adaptive(pieces, std::move(initial), abs_tol, spec.rel_tol, spec.max_subdivisions);
    }

    QuadratureResult out{body.value + tails.value, body.error + tails.error,
                         body.evaluations + tails.evaluations};
    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
    if (out.error > tol) {
        std::ostringstream msg;
        msg << "quadrature did not converge: combined error " << out.error << " exceeds " << tol;
        throw NonConvergence(msg.str());
    }
    return out;
}

RealQuadratureResult integrate_real(const RealFunction& f, double a, double b,
                                    const QuadratureSpec& spec) {
    const double points[2] = {a, b};
    return integrate_real(f, std::span<const double>(points), spec);
}

RealQuadratureResult integrate_real(const RealFunction& f, std::span<const double> points,
                                    const QuadratureSpec& spec) {
    const auto r = integrate([&f](double x) { return Complex(f(x), 0.0); }, points, spec);
    return {r.value.real(), r.error};
}

void RootSpec::validate() const {
    if (!(bracket_lo < bracket_hi)) throw DomainError("RootSpec: bracket_lo must be < bracket_hi");
    if (!(tol > 0.0)) throw DomainError("RootSpec: tol must be > 0");
    if (max_iterations < 1) throw DomainError("RootSpec: max_iterations must be >= 1");
}

double find_root(const RealFunction& f, const RootSpec& spec) {
    spec.validate();
    double a = spec.bracket_lo;
    double b = spec.bracket_hi;
    double fa = f(a);
    double fb = f(b);
    if (std::isnan(fa) || std::isnan(fb)) throw DomainError("find_root: function is NaN at bracket end");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0)) {
        std::ostringstream msg;
        msg << "find_root: no sign change on [" << a << ", " << b << "] (f = " << fa << ", " << fb << ")";
        throw NoSignChange(msg.str());
    }

    double c = a;
    double fc = fa;
    double d = b - a;
    double e = d;
    for (int iter = 0; iter < spec.max_iterations; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * spec.tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            const double s = fb / fa;
            double p;
            double q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qa = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
        if (std::isnan(fb)) throw DomainError("find_root: function returned NaN inside bracket");
    }
    throw NonConvergence("find_root: iteration budget exhausted");
}

Complex expm1(Complex z) {
    const double x = z.real();
    const double y = z.imag();
    const double half_sin = std::sin(0.5 * y);
    const double re = std::expm1(x) * std::cos(y) - 2.0 * half_sin * half_sin;
    const double im = std::exp(x) * std::sin(y);
    return {re, im};
}

} // namespace zeno::numerics

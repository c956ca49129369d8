#include "zeno/collapse_oracle.hpp"

#include "zeno/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

namespace zeno::collapse {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateMargin = 1e-14;

// T(D) = Int_{|k| > K} e^{-ikD} / ((k - M0)^2 + a^2) dk, a = Gamma/2, with T(-D) = conj T(D).
// Computed as the full-line value minus the lattice range; memoized because every norm
// evaluation needs it at the same few shift differences.
class TailKernel {
public:
    Complex operator()(const ExponentialDecay& sys, double k_max, double delta) {
        if (delta < 0.0) return std::conj((*this)(sys, k_max, -delta));
        const auto key = std::make_tuple(sys.width, sys.bare_mass, k_max, delta);
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        }
        const Complex value = evaluate(sys, k_max, delta);
        std::lock_guard lock(mutex_);
        cache_.emplace(key, value);
        return value;
    }

private:
    static Complex evaluate(const ExponentialDecay& sys, double k_max, double delta) {
        const double a = 0.5 * sys.width;
        const double m0 = sys.bare_mass;
        const Complex full = (kPi / a) * std::polar(std::exp(-a * delta), -m0 * delta);
        if (delta == 0.0) {
            return full - (std::atan((k_max - m0) / a) + std::atan((k_max + m0) / a)) / a;
        }
        numerics::QuadratureSpec spec;
        spec.abs_tol = 1e-13;
        spec.rel_tol = 1e-13;
        spec.max_subdivisions = 200000;
        spec.oscillatory_hint = delta;
        std::vector<double> pts{-k_max, k_max};
        if (m0 > -k_max && m0 < k_max) pts.insert(pts.begin() + 1, m0);
        const auto inside = numerics::integrate(
            [&](double k) {
                const double x = k - m0;
                return std::polar(1.0 / (x * x + a * a), -k * delta);
            },
            pts, spec);
        return full - inside.value;
    }

    std::mutex mutex_;
    std::map<std::tuple<double, double, double, double>, Complex> cache_;
};

TailKernel& tail_kernel() {
    static TailKernel kernel;
    return kernel;
}

void merge_tail(std::vector<TailTerm>& tail) {
    std::sort(tail.begin(), tail.end(), [](const TailTerm& x, const TailTerm& y) { return x.shift < y.shift; });
    std::vector<TailTerm> merged;
    for (const auto& term : tail) {
        if (!merged.empty() &&
            std::abs(term.shift - merged.back().shift) <= 1e-12 * std::max(1.0, term.shift)) {
            merged.back().weight += term.weight;
        } else {
            merged.push_back(term);
        }
    }
    std::erase_if(merged, [](const TailTerm& t) { return t.weight == Complex(0.0, 0.0); });
    tail = std::move(merged);
}

} // namespace

double off_lattice_norm(const KLattice& lattice, const ExponentialDecay& sys,
                        std::span<const TailTerm> tail) {
    if (tail.empty()) return 0.0;
    auto& kernel = tail_kernel();
    double sum = 0.0;
    for (std::size_t i = 0; i < tail.size(); ++i) {
        sum += std::norm(tail[i].weight) * kernel(sys, lattice.k_max, 0.0).real();
        for (std::size_t j = i + 1; j < tail.size(); ++j) {
            const Complex cross = tail[i].weight * std::conj(tail[j].weight) *
                                  kernel(sys, lattice.k_max, tail[i].shift - tail[j].shift);
            sum += 2.0 * cross.real();
        }
    }
    return sys.width / (2.0 * kPi) * sum;
}

double emission_norm_defect(const KLattice& lattice, const ExponentialDecay& sys, double dt) {
    lattice.validate();
    sys.validate();
    if (!(dt >= 0.0)) throw DomainError("emission_norm_defect: t must be >= 0");
    if (dt == 0.0) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < lattice.n_points; ++j) {
        sum += bang_bang::mode_density(sys, lattice.node(j), dt);
    }
    const Complex decay = std::polar(std::exp(-0.5 * sys.width * dt), -sys.bare_mass * dt);
    const TailTerm fresh[] = {{0.0, -decay}, {dt, 1.0}};
    return std::exp(-sys.width * dt) + sum * lattice.spacing() + off_lattice_norm(lattice, sys, fresh) - 1.0;
}

void KLattice::validate() const {
    if (!(k_max > 0.0) || !std::isfinite(k_max)) throw DomainError("KLattice: k_max must be finite and > 0");
    if (n_points < 2) throw DomainError("KLattice: need at least 2 points");
}

std::vector<std::string> KLattice::validity_warnings(const ExponentialDecay& sys,
                                                     const DetectorBand& band) const {
    std::vector<std::string> out;
    double scale = sys.width;
    if (!band.perfect()) scale = std::max(scale, band.half_width);
    if (k_max < 20.0 * scale) {
        std::ostringstream msg;
        msg << "k_max = " << k_max << " is below 20 max(Gamma, lambda) = " << 20.0 * scale;
        out.push_back(msg.str());
    }
    if (!band.perfect() && band.half_width > 0.0 && band.half_width < spacing()) {
        out.push_back("band narrower than one lattice cell");
    }
    return out;
}

SnappedBand snap_band(const KLattice& lattice, const DetectorBand& band) {
    lattice.validate();
    band.validate();
    SnappedBand out;
    if (band.perfect()) {
        out.first = 0;
        out.last = lattice.n_points;
        out.covers_tail = true;
        out.half_width = band.half_width;
        out.center = band.center;
        return out;
    }
    const double dk = lattice.spacing();
    const auto n = static_cast<double>(lattice.n_points);
    auto boundary = [&](double e) {
        return static_cast<std::size_t>(std::clamp(std::round((e + lattice.k_max) / dk), 0.0, n));
    };
    out.first = boundary(band.lo());
    out.last = std::max(out.first, boundary(band.hi()));
    const double lo = -lattice.k_max + static_cast<double>(out.first) * dk;
    const double hi = -lattice.k_max + static_cast<double>(out.last) * dk;
    out.half_width = 0.5 * (hi - lo);
    out.center = out.first == out.last ? band.center : 0.5 * (hi + lo);
    return out;
}

StateVector::StateVector(const KLattice& lattice, const ExponentialDecay& sys)
    : amp_s(0.0, 0.0), amp_k(lattice.n_points), lattice_(lattice), sys_(sys) {}

StateVector StateVector::excited(const KLattice& lattice, const ExponentialDecay& sys) {
    lattice.validate();
    sys.validate();
    StateVector s(lattice, sys);
    s.amp_s = 1.0;
    s.cached_norm_ = 1.0;
    return s;
}

double StateVector::lattice_norm(std::size_t first, std::size_t last) const {
    double sum = 0.0;
    for (std::size_t j = first; j < last; ++j) sum += std::norm(amp_k[j]);
    return sum * lattice_.spacing();
}

double StateVector::tail_norm() const { return off_lattice_norm(lattice_, sys_, tail); }

double StateVector::norm() const {
    return std::norm(amp_s) + lattice_norm(0, amp_k.size()) + tail_norm();
}

StateVector evolve_free(StateVector state, const ExponentialDecay& sys, double dt) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw DomainError("evolve_free: dt must be finite and >= 0");
    if (!(sys == state.system())) throw DomainError("evolve_free: state was built for a different system");
    if (dt == 0.0) return state;

    const KLattice& lat = state.lattice();
    const Complex s = state.amp_s;
    for (std::size_t j = 0; j < state.amp_k.size(); ++j) {
        const double k = lat.node(j);
        state.amp_k[j] = state.amp_k[j] * std::polar(1.0, -k * dt) + s * bang_bang::mode_amplitude(sys, k, dt);
    }
    const Complex decay = std::polar(std::exp(-0.5 * sys.width * dt), -sys.bare_mass * dt);
    for (auto& term : state.tail) term.shift += dt;
    if (s != Complex(0.0, 0.0)) {
        state.tail.push_back({dt, s});
        state.tail.push_back({0.0, -s * decay});
    }
    merge_tail(state.tail);
    state.amp_s = s * decay;
    state.elapsed += dt;

    state.refresh_norm();
    {
        const double drift = std::abs(emission_norm_defect(lat, sys, state.elapsed));
        if (drift > kNormDriftTolerance) {
            std::ostringstream msg;
            msg << "lattice norm drifted by " << drift << " during free evolution (k_max = " << lat.k_max
                << ", n_points = " << lat.n_points << ")";
            throw NormLoss(msg.str(), drift);
        }
    }
    return state;
}

double click_probability(const StateVector& state, const SnappedBand& band) {
    double p = state.lattice_norm(band.first, band.last);
    if (band.covers_tail) p += state.tail_norm();
    return p;
}

Collapse measure_collapse(const StateVector& state, const SnappedBand& band, Outcome branch) {
    if (band.last > state.amp_k.size()) throw DomainError("measure_collapse: band does not fit the lattice");
    const double p = click_probability(state, band);
    StateVector post = state;
    if (branch == Outcome::no_click) {
        if (p >= 1.0 - kDegenerateMargin) {
            throw DegenerateCollapse("measure_collapse: no-click branch has vanishing probability");
        }
        std::fill(post.amp_k.begin() + band.first, post.amp_k.begin() + band.last, Complex(0.0, 0.0));
        if (band.covers_tail) post.tail.clear();
        const double scale = 1.0 / std::sqrt(1.0 - p);
        post.amp_s *= scale;
        for (auto& a : post.amp_k) a *= scale;
        for (auto& t : post.tail) t.weight *= scale;
    } else {
        if (!(p > 0.0)) throw DomainError("measure_collapse: click branch has zero probability");
        const double scale = 1.0 / std::sqrt(p);
        post.amp_s = 0.0;
        for (std::size_t j = 0; j < post.amp_k.size(); ++j) {
            post.amp_k[j] = (j >= band.first && j < band.last) ? post.amp_k[j] * scale : Complex(0.0, 0.0);
        }
        if (band.covers_tail) {
            for (auto& t : post.tail) t.weight *= scale;
        } else {
            post.tail.clear();
        }
    }
    post.refresh_norm();
    return {branch, std::move(post), p};
}

DeterministicRun run_deterministic(const ExponentialDecay& sys, const DetectorBand& band,
                                   const MeasurementSchedule& schedule, const KLattice& lattice) {
    sys.validate();
    schedule.validate();
    DeterministicRun out;
    out.band = snap_band(lattice, band);
    StateVector state = StateVector::excited(lattice, sys);
    double survive = 1.0;
    for (int m = 1; m <= schedule.pulses; ++m) {
        state = evolve_free(std::move(state), sys, schedule.interval);
        out.max_norm_drift =
            std::max(out.max_norm_drift, std::abs(emission_norm_defect(lattice, sys, state.elapsed)));
        auto c = measure_collapse(state, out.band, Outcome::no_click);
        out.click_given_survival.push_back(c.p_click);
        survive *= 1.0 - c.p_click;
        out.no_click.push_back(survive);
        state = std::move(c.posterior);
    }
    return out;
}

TrajectoryStats run_sampled(const ExponentialDecay& sys, const DetectorBand& band,
                            const MeasurementSchedule& schedule, const KLattice& lattice,
                            long trials, std::uint64_t seed) {
    if (trials < 1) throw DomainError("run_sampled: trials must be >= 1");
    // Along the no-click branch the conditional state is deterministic, so each trial only
    // needs the per-pulse conditional click probabilities.
    const DeterministicRun branch = run_deterministic(sys, band, schedule, lattice);

    TrajectoryStats out;
    out.manifest = {seed, "mt19937_64", lattice, sys, schedule, band, branch.band.half_width, trials};
    const auto n = static_cast<std::size_t>(schedule.pulses);
    out.histogram.assign(n + 1, 0);
    std::mt19937_64 rng(seed);
    for (long trial = 0; trial < trials; ++trial) {
        std::size_t m = 0;
        for (; m < n; ++m) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (u < branch.click_given_survival[m]) break;
        }
        ++out.histogram[m];
    }
    long clicked = 0;
    for (std::size_t m = 0; m < n; ++m) {
        clicked += out.histogram[m];
        out.no_click.push_back(static_cast<double>(trials - clicked) / static_cast<double>(trials));
    }
    return out;
}

std::string to_json(const TrajectoryStats& stats) {
    const auto& m = stats.manifest;
    nlohmann::ordered_json j;
    j["manifest"] = {
        {"seed", m.seed},
        {"generator", m.generator},
        {"lattice", {{"k_max", m.lattice.k_max}, {"n_points", m.lattice.n_points}}},
        {"system", {{"gamma", m.system.width}, {"m0", m.system.bare_mass}}},
        {"schedule", {{"tau", m.schedule.interval}, {"n", m.schedule.pulses}}},
        {"detector",
         {{"lambda", m.requested_band.perfect() ? nlohmann::ordered_json("inf")
                                                : nlohmann::ordered_json(m.requested_band.half_width)},
          {"center", m.requested_band.center},
          {"lambda_snapped", m.requested_band.perfect() ? nlohmann::ordered_json("inf")
                                                        : nlohmann::ordered_json(m.snapped_half_width)}}},
        {"trials", m.trials},
    };
    j["histogram"] = stats.histogram;
    j["no_click"] = stats.no_click;
    return j.dump(2) + "\n";
}

std::vector<NormIdentitySample> post_collapse_norm(const ExponentialDecay& sys,
                                                   const DetectorBand& band, double tau,
                                                   const KLattice& lattice,
                                                   const std::vector<double>& t_primes) {
    if (!(tau > 0.0)) throw DomainError("post_collapse_norm: tau must be > 0");
    const SnappedBand snapped = snap_band(lattice, band);
    StateVector state = evolve_free(StateVector::excited(lattice, sys), sys, tau);
    const auto first = measure_collapse(state, snapped, Outcome::no_click);
    const double n2 = 1.0 / (1.0 - first.p_click);
    const double p_tau = std::exp(-sys.width * tau);

    numerics::QuadratureSpec spec;
    spec.abs_tol = 1e-12;
    spec.rel_tol = 1e-11;
    std::vector<NormIdentitySample> out;
    for (double tp : t_primes) {
        const StateVector later = evolve_free(first.posterior, sys, tp);
        const double w = bang_bang::band_click_probability(sys, snapped.as_band(), tp, spec);
        NormIdentitySample s;
        s.t_prime = tp;
        s.closed_part = n2 * p_tau * (std::exp(-sys.width * tp) + w);
        s.lattice_part = later.lattice_norm(0, snapped.first) +
                         later.lattice_norm(snapped.last, later.amp_k.size()) +
                         (snapped.covers_tail ? 0.0 : later.tail_norm());
        out.push_back(s);
    }
    return out;
}

} // namespace zeno::collapse

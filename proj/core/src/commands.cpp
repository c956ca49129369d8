#include "zeno/commands.hpp"

#include "zeno/bang_bang.hpp"
#include "zeno/errors.hpp"
#include "zeno/lee_model.hpp"
#include "zeno/parallel.hpp"
#include "zeno/qft_model.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>

#ifndef ZENO_VERSION
#define ZENO_VERSION "0.0.0"
#endif

namespace zeno::commands {

namespace {

using config::format_double;
using config::RunConfig;

void add_common_meta(CurveFile& curve, std::string_view command, const RunConfig& cfg) {
    curve.add_meta("generator", "zeno-lab " + std::string(version()));
    curve.add_meta("command", std::string(command));
    for (auto& [k, v] : config::physics_entries(cfg)) curve.add_meta(k, v);
    if (!cfg.provenance.empty()) curve.add_meta("provenance", cfg.provenance);
}

const bang_bang::ExponentialDecay& require_exponential(const RunConfig& cfg, std::string_view command) {
    const auto* sys = std::get_if<bang_bang::ExponentialDecay>(&cfg.model);
    if (!sys) throw ConfigError(std::string(command) + " needs an exponential.* model section", "model");
    return *sys;
}

bang_bang::DetectorBand require_detector(const RunConfig& cfg) {
    if (!cfg.detector) throw ConfigError("missing detector.lambda", "detector.lambda");
    return *cfg.detector;
}

bang_bang::MeasurementSchedule require_schedule(const RunConfig& cfg) {
    if (!cfg.schedule.interval) throw ConfigError("missing schedule.tau", "schedule.tau");
    if (!cfg.schedule.pulses) throw ConfigError("missing schedule.n", "schedule.n");
    return {*cfg.schedule.interval, *cfg.schedule.pulses};
}

void require_grid(const RunConfig& cfg) {
    if (cfg.grid.empty()) throw EmptyGrid("grid is empty: set grid.values or grid.start/stop/points", "grid");
    for (std::size_t i = 1; i < cfg.grid.size(); ++i) {
        if (!(cfg.grid[i] > cfg.grid[i - 1])) throw ConfigError("grid must be strictly increasing", "grid");
    }
}

Check make_check(std::string name, double deviation, double tolerance, std::string detail = {},
                 bool gating = true) {
    return {std::move(name), deviation <= tolerance, gating, deviation, tolerance, std::move(detail)};
}

nlohmann::ordered_json number_or_inf(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

} // namespace

std::string_view version() { return ZENO_VERSION; }

CurveFile cmd_survival(const RunConfig& cfg) {
    if (std::holds_alternative<qft::QftModel>(cfg.model)) {
        throw ConfigError("survival needs a qm.* or exponential.* model section", "model");
    }
    require_grid(cfg);
    if (cfg.grid.front() < 0.0) throw ConfigError("survival times must be >= 0", "grid");

    CurveFile curve;
    add_common_meta(curve, "survival", cfg);
    const auto& t = cfg.grid;

    if (const auto* sys = std::get_if<bang_bang::ExponentialDecay>(&cfg.model)) {
        curve.columns = {"t", "p_survival"};
        curve.probability_columns = {"p_survival"};
        for (double ti : t) curve.rows.push_back({ti, std::exp(-sys->width * ti)});
        curve.validate();
        return curve;
    }

    const auto& qm = std::get<config::QmParams>(cfg.model);
    const lee::CutoffLeeModel model(qm.bare_mass, qm.half_width, qm.coupling, qm.window_center);
    const double width = lee::bw_width(model);
    curve.add_meta("renormalized_mass", format_double(lee::renormalized_mass(model)));
    curve.add_meta("gamma_bw", format_double(width));
    curve.add_meta("zeno_time", format_double(lee::zeno_time(model)));

    std::vector<double> p(t.size());
    parallel_for(t.size(), [&](std::size_t i) { p[i] = lee::survival_probability(model, t[i], cfg.numerics); });
    double max_dev = 0.0;
    curve.columns = {"t", "p_survival", "p_bw_reference"};
    curve.probability_columns = {"p_survival", "p_bw_reference"};
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double ref = std::exp(-width * t[i]);
        max_dev = std::max(max_dev, std::abs(p[i] - ref));
        curve.rows.push_back({t[i], p[i], ref});
    }
    curve.add_meta("max_abs_deviation_from_reference", format_double(max_dev));
    curve.validate();
    return curve;
}

ZenoOutput cmd_zeno(const RunConfig& cfg) {
    const auto& sys = require_exponential(cfg, "zeno");
    const auto band = require_detector(cfg);
    const auto sched = require_schedule(cfg);

    const double w = bang_bang::band_click_probability(sys, band, sched.interval, cfg.numerics);
    const auto record = bang_bang::no_click_probability(sys, band, sched, cfg.numerics);

    ZenoOutput out;
    CurveFile& curve = out.curve;
    add_common_meta(curve, "zeno", cfg);
    curve.add_meta("w_lambda", format_double(w));
    curve.add_meta("saturation_value", format_double(1.0 - w / -std::expm1(-sys.width * sched.interval)));
    curve.add_meta("schulman_sigma", format_double(bang_bang::schulman_sigma(sched.interval)));
    curve.columns = {"t", "p_no_click", "p_survival", "p_first_click_at_pulse"};
    curve.probability_columns = {"p_no_click", "p_survival", "p_first_click_at_pulse"};
    curve.rows.push_back({0.0, 1.0, 1.0, 0.0});
    for (int m = 1; m <= sched.pulses; ++m) {
        const double t = m * sched.interval;
        const auto i = static_cast<std::size_t>(m - 1);
        curve.rows.push_back({t, record.cumulative_no_click[i], std::exp(-sys.width * t), record.per_step[i]});
    }
    curve.validate();

    if (!cfg.schedule.interval_list.empty()) {
        if (!cfg.schedule.total_time) throw ConfigError("schedule.tau_list needs schedule.t_total", "schedule.t_total");
        auto taus = cfg.schedule.interval_list;
        std::sort(taus.begin(), taus.end());
        if (std::adjacent_find(taus.begin(), taus.end()) != taus.end()) {
            throw ConfigError("schedule.tau_list has repeated values", "schedule.tau_list");
        }
        const auto points = bang_bang::zeno_freeze_curve(sys, band, *cfg.schedule.total_time, taus, cfg.numerics);
        CurveFile freeze;
        add_common_meta(freeze, "zeno-freeze", cfg);
        freeze.columns = {"tau", "pulses", "t_reached", "p_no_click", "schulman_sigma"};
        freeze.probability_columns = {"p_no_click"};
        for (const auto& p : points) {
            freeze.rows.push_back({p.interval, static_cast<double>(p.pulses), p.time, p.no_click,
                                   bang_bang::schulman_sigma(p.interval)});
        }
        freeze.validate();
        out.freeze = std::move(freeze);
    }
    return out;
}

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed || !c.gating; });
}

std::string ValidationReport::failures() const {
    std::string out;
    for (const auto& c : checks) {
        if (c.passed || !c.gating) continue;
        if (!out.empty()) out += ", ";
        out += c.name;
    }
    return out;
}

std::string ValidationReport::to_json(const RunConfig& cfg) const {
    nlohmann::ordered_json j;
    j["generator"] = "zeno-lab " + std::string(version());
    j["passed"] = passed();
    nlohmann::ordered_json physics = nlohmann::ordered_json::object();
    for (auto& [k, v] : config::physics_entries(cfg)) physics[k] = v;
    j["physics"] = physics;
    j["lattice"] = {{"k_max", cfg.lattice.k_max}, {"n_points", cfg.lattice.n_points}};
    j["lambda_snapped"] = number_or_inf(snapped_half_width);
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"gating", c.gating},
                               {"deviation", number_or_inf(c.deviation)},
                               {"tolerance", c.tolerance},
                               {"detail", c.detail}});
    }
    j["warnings"] = warnings;
    return j.dump(2) + "\n";
}

ValidationReport cmd_validate(const RunConfig& cfg) {
    const auto& sys = require_exponential(cfg, "validate");
    const auto band = require_detector(cfg);
    const auto sched = require_schedule(cfg);
    const auto& lattice = cfg.lattice;
    lattice.validate();

    ValidationReport report;
    report.warnings = lattice.validity_warnings(sys, band);
    const auto snapped = collapse::snap_band(lattice, band);
    report.snapped_half_width = snapped.half_width;

    const double defect = std::abs(collapse::emission_norm_defect(lattice, sys, sched.total_time()));
    report.checks.push_back(make_check("lattice_norm", defect, collapse::kNormDriftTolerance,
                                       defect > collapse::kNormDriftTolerance ? "NormLoss: lattice too coarse or too short"
                                                                              : ""));
    if (!report.checks.back().passed) return report;

    numerics::QuadratureSpec tight = cfg.numerics;
    tight.abs_tol = std::min(tight.abs_tol, 1e-12);
    tight.rel_tol = std::min(tight.rel_tol, 1e-11);
    const double w = bang_bang::band_click_probability(sys, snapped.as_band(), sched.interval, tight);
    const auto closed = bang_bang::click_record(sys, w, sched);
    const auto run = collapse::run_deterministic(sys, band, sched, lattice);

    double dev_nc = 0.0, dev_click = 0.0, survive = 1.0;
    for (std::size_t i = 0; i < run.no_click.size(); ++i) {
        dev_nc = std::max(dev_nc, std::abs(run.no_click[i] - closed.cumulative_no_click[i]));
        dev_click = std::max(dev_click, std::abs(survive * run.click_given_survival[i] - closed.per_step[i]));
        survive = run.no_click[i];
    }
    report.checks.push_back(make_check("no_click_vs_closed_form", dev_nc, 1e-3,
                                       "max over pulses of |oracle - closed form| at the snapped band"));
    report.checks.push_back(make_check("click_at_pulse_vs_closed_form", dev_click, 1e-3));

    {
        auto state = collapse::evolve_free(collapse::StateVector::excited(lattice, sys), sys, sched.interval);
        const bool certain = collapse::click_probability(state, snapped) >= 1.0 - 1e-14;
        double second = 0.0;
        if (!certain) {
            const auto first = collapse::measure_collapse(state, snapped, collapse::Outcome::no_click);
            second = collapse::measure_collapse(first.posterior, snapped, collapse::Outcome::no_click).p_click;
        }
        report.checks.push_back(make_check("collapse_idempotence", second, 1e-15));
    }

    {
        const double tau = sched.interval;
        const auto samples = collapse::post_collapse_norm(sys, band, tau, lattice, {0.25 * tau, 0.5 * tau, tau});
        double dev = 0.0;
        for (const auto& s : samples) dev = std::max(dev, std::abs(s.total() - 1.0));
        report.checks.push_back(make_check(
            "post_collapse_norm_identity", dev, 1e-6,
            "free evolution of the post-collapse state does not conserve the norm inside the removed band",
            false));
    }

    if (cfg.trials > 0) {
        auto stats = collapse::run_sampled(sys, band, sched, lattice, cfg.trials, cfg.seed);
        const double p = closed.cumulative_no_click.back();
        const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(cfg.trials));
        const double z = std::abs(stats.no_click.back() - p) / sigma;
        report.checks.push_back(make_check("sampled_no_click_vs_closed_form", z, 3.0,
                                           "deviation in Monte Carlo standard errors at the last pulse"));
        report.trajectories = std::move(stats);
    }
    return report;
}

CurveFile cmd_qft(const RunConfig& cfg) {
    const auto* model = std::get_if<qft::QftModel>(&cfg.model);
    if (!model) throw ConfigError("qft needs a qft.* model section", "model");
    require_grid(cfg);
    if (!(cfg.grid.front() > 0.0)) throw ConfigError("qft grid values must be > 0", "grid");

    CurveFile curve;
    add_common_meta(curve, "qft", cfg);
    const auto res = qft::resonance(*model);
    curve.add_meta("renormalized_mass", format_double(res.mass));
    curve.add_meta("tree_level_width", format_double(res.width));
    curve.add_meta("threshold", format_double(model->threshold()));
    curve.add_meta("cutoff_edge", format_double(model->cutoff_edge()));

    const auto& x = cfg.grid;
    std::vector<qft::LoopSelfEnergy> pi(x.size());
    parallel_for(x.size(), [&](std::size_t i) { pi[i] = qft::polarization(*model, x[i]); });

    const bool with_bw = res.width > 0.0;
    curve.columns = {"x", "gamma_tl", "re_pi", "im_pi", "spectral", "optical_rel_dev"};
    if (with_bw) {
        curve.columns.push_back("bw_rel_norm");
        curve.columns.push_back("bw_nonrel_norm");
    }
    double max_optical = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double gamma = qft::tree_level_width(*model, x[i]);
        const double rhs = x[i] * gamma;
        const double optical = rhs > 0.0 ? std::abs(pi[i].im - rhs) / rhs : std::abs(pi[i].im);
        max_optical = std::max(max_optical, optical);
        const double m02 = model->bare_mass * model->bare_mass;
        const double spectral =
            -(1.0 / std::complex<double>(x[i] * x[i] - m02 + pi[i].re, pi[i].im)).imag() / std::numbers::pi;
        std::vector<double> row{x[i], gamma, pi[i].re, pi[i].im, spectral, optical};
        if (with_bw) {
            const auto bw = qft::bw_propagators(res, x[i]);
            const auto peak = qft::bw_propagators(res, res.mass);
            row.push_back(std::abs(bw.relativistic) / std::abs(peak.relativistic));
            row.push_back(std::abs(bw.nonrelativistic) / std::abs(peak.nonrelativistic));
        }
        curve.rows.push_back(std::move(row));
    }
    curve.add_meta("optical_max_rel_dev", format_double(max_optical));
    curve.validate();
    return curve;
}

int run(std::string_view command, const RunConfig& cfg, std::ostream& log) {
    const auto& dir = cfg.output_dir;
    auto emit = [&](const std::string& name, const std::string& content) {
        const auto path = dir / name;
        write_atomic(path, content);
        log << "wrote " << path.string() << "\n";
    };

    if (command == "survival") {
        emit("survival.csv", to_csv(cmd_survival(cfg)));
        return 0;
    }
    if (command == "zeno") {
        const auto out = cmd_zeno(cfg);
        emit("zeno.csv", to_csv(out.curve));
        if (out.freeze) emit("zeno_freeze.csv", to_csv(*out.freeze));
        return 0;
    }
    if (command == "validate") {
        const auto report = cmd_validate(cfg);
        emit("validate.json", report.to_json(cfg));
        if (report.trajectories) emit("trajectories.json", collapse::to_json(*report.trajectories));
        for (const auto& w : report.warnings) log << "warning: " << w << "\n";
        for (const auto& c : report.checks) {
            log << (c.passed ? "PASS " : (c.gating ? "FAIL " : "NOTE ")) << c.name << " deviation "
                << format_double(c.deviation) << " tolerance " << format_double(c.tolerance) << "\n";
        }
        if (!report.passed()) {
            log << "validation failed: " << report.failures() << "\n";
            return 4;
        }
        return 0;
    }
    if (command == "qft") {
        emit("qft.csv", to_csv(cmd_qft(cfg)));
        return 0;
    }
    throw ConfigError("unknown command '" + std::string(command) + "'", "command");
}

} // namespace zeno::commands

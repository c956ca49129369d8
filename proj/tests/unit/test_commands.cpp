#include "zeno/commands.hpp"
#include "zeno/config.hpp"
#include "zeno/errors.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

using namespace zeno;
namespace fs = std::filesystem;

namespace {

config::RunConfig preset(std::string_view name, std::string_view extra = {}) {
    auto entries = config::parse_entries(config::preset_text(name));
    if (!extra.empty()) entries = config::merge(std::move(entries), config::parse_entries(extra));
    return config::build(entries);
}

} // namespace

TEST(Survival, ExponentialColumn) {
    const auto cfg = config::parse("exponential.gamma = 1\ngrid.values = 0, 1, 2\n");
    const auto c = commands::cmd_survival(cfg);
    EXPECT_EQ(c.column("p_survival"), (std::vector<double>{1.0, std::exp(-1.0), std::exp(-2.0)}));
}

TEST(Survival, EmptyGridRejected) {
    const auto cfg = config::parse("exponential.gamma = 1\ngrid.start = 0\ngrid.stop = 1\ngrid.points = 0\n");
    EXPECT_THROW(commands::cmd_survival(cfg), EmptyGrid);
    EXPECT_THROW(commands::cmd_survival(config::parse("exponential.gamma = 1\n")), EmptyGrid);
}

TEST(Survival, WideWindowTracksReference) {
    const auto c = commands::cmd_survival(preset("qm-exponential-limit"));
    const auto p = c.column("p_survival");
    const auto ref = c.column("p_bw_reference");
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], ref[i], 0.01);
    EXPECT_LT(std::stod(*c.meta("max_abs_deviation_from_reference")), 0.01);
}

TEST(Zeno, PerfectDetectorColumnsCoincide) {
    const auto out = commands::cmd_zeno(preset("perfect-detector"));
    const auto a = out.curve.column("p_no_click");
    const auto b = out.curve.column("p_survival");
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
    EXPECT_EQ(*out.curve.meta("saturation_value"), "0");
    EXPECT_FALSE(out.freeze);
}

TEST(Zeno, ReconstructedPanels) {
    const auto left = commands::cmd_zeno(preset("fig1-left")).curve;
    const auto right = commands::cmd_zeno(preset("fig1-right")).curve;
    EXPECT_NEAR(left.rows.back()[0], 5.0, 1e-12);
    EXPECT_NEAR(right.rows.back()[0], 5.0, 1e-12);
    const double l = left.column("p_no_click").back();
    const double r = right.column("p_no_click").back();
    EXPECT_GE(l, 0.88);
    EXPECT_LE(l, 0.92);
    EXPECT_GE(r, 0.18);
    EXPECT_LE(r, 0.22);
    EXPECT_EQ(*left.meta("provenance"), "derived");
    EXPECT_EQ(*right.meta("provenance"), "derived");
    EXPECT_EQ(*left.meta("schulman_sigma"), "40");
}

TEST(Zeno, FreezeCurveWhenTauListGiven) {
    const auto out = commands::cmd_zeno(preset("zeno-freeze"));
    ASSERT_TRUE(out.freeze);
    const auto p = out.freeze->column("p_no_click");
    ASSERT_EQ(p.size(), 5u);
    for (std::size_t i = 1; i < p.size(); ++i) EXPECT_LE(p[i], p[i - 1]);
    EXPECT_GT(p.front(), 0.95);
}

TEST(Zeno, TauListNeedsTotalTime) {
    EXPECT_THROW(commands::cmd_zeno(preset("fig1-left", "schedule.tau_list = 0.1, 0.2\n")), ConfigError);
}

TEST(Validate, ReferenceLatticePassesGatingChecks) {
    auto cfg = preset("validate-default", "run.trials = 20000\n");
    const auto report = commands::cmd_validate(cfg);
    EXPECT_TRUE(report.passed()) << report.failures();
    for (const auto& c : report.checks) {
        if (c.name == "no_click_vs_closed_form") EXPECT_LT(c.deviation, 1e-3);
        if (c.name == "post_collapse_norm_identity") {
            EXPECT_FALSE(c.gating);
            EXPECT_FALSE(c.passed);
        }
    }
    ASSERT_TRUE(report.trajectories);
    const auto j = nlohmann::json::parse(report.to_json(cfg));
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["checks"].size(), report.checks.size());
}

TEST(Validate, TinyLatticeFlagsNormLoss) {
    const auto report = commands::cmd_validate(preset("validate-default", "lattice.n_points = 256\nrun.trials = 0\n"));
    EXPECT_FALSE(report.passed());
    EXPECT_EQ(report.failures(), "lattice_norm");
    EXPECT_NE(report.checks.front().detail.find("NormLoss"), std::string::npos);
}

TEST(Validate, BlindDetectorPassesEverything) {
    const auto report = commands::cmd_validate(preset("validate-default", "detector.lambda = 0\nrun.trials = 1000\n"));
    for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.deviation;
}

TEST(Qft, ColumnsAndClosedForms) {
    const auto cfg = config::parse("qft.bare_mass = 1\nqft.product_mass = 0\nqft.coupling = 0.3\nqft.cutoff = 3\n"
                                   "grid.values = 0.5, 1, 2\n");
    const auto c = commands::cmd_qft(cfg);
    const auto x = c.column("x");
    const auto gamma = c.column("gamma_tl");
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(gamma[i], 0.09 / (8 * std::numbers::pi * x[i]), 1e-15);
    EXPECT_LT(std::stod(*c.meta("optical_max_rel_dev")), 1e-6);
    EXPECT_LT(std::stod(*c.meta("renormalized_mass")), 1.0);
}

TEST(Qft, DemoPresetBelowThresholdRowsHaveZeroWidth) {
    const auto c = commands::cmd_qft(preset("qft-demo"));
    const auto x = c.column("x");
    const auto gamma = c.column("gamma_tl");
    const auto spectral = c.column("spectral");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0.4) EXPECT_EQ(gamma[i], 0.0);
        EXPECT_GE(spectral[i], 0.0);
    }
}

TEST(Run, WritesFilesAndUnknownCommandIsConfigError) {
    const auto dir = fs::temp_directory_path() / "zeno_run_test";
    fs::remove_all(dir);
    auto cfg = preset("zeno-freeze");
    cfg.output_dir = dir;
    std::ostringstream log;
    EXPECT_EQ(commands::run("zeno", cfg, log), 0);
    EXPECT_TRUE(fs::exists(dir / "zeno.csv"));
    EXPECT_TRUE(fs::exists(dir / "zeno_freeze.csv"));
    const auto back = parse_csv(config::read_file(dir / "zeno.csv"));
    const auto physics = physics_from_header(back);
    EXPECT_EQ(physics.model, cfg.model);
    EXPECT_EQ(physics.detector, cfg.detector);
    EXPECT_EQ(physics.schedule, cfg.schedule);
    EXPECT_THROW(commands::run("plot", cfg, log), ConfigError);
    fs::remove_all(dir);
}

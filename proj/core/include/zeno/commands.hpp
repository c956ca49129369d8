#pragma once

#include "zeno/collapse_oracle.hpp"
#include "zeno/config.hpp"
#include "zeno/curve_file.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zeno::commands {

std::string_view version();

/// (t, survival probability); qm models add the exp(-Gamma_BW t) reference column.
/// Throws EmptyGrid when no times are configured.
CurveFile cmd_survival(const config::RunConfig& cfg);

struct ZenoOutput {
    CurveFile curve;                ///< (n tau, no-click, exp(-Gamma t), first-click-at-pulse)
    std::optional<CurveFile> freeze;  ///< no-click at t_total against tau, when tau_list is set
};

ZenoOutput cmd_zeno(const config::RunConfig& cfg);

struct Check {
    std::string name;
    bool passed = false;
    bool gating = true;  ///< non-gating checks are reported but do not fail the run
    double deviation = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<Check> checks;
    std::vector<std::string> warnings;
    double snapped_half_width = 0.0;
    std::optional<collapse::TrajectoryStats> trajectories;

    bool passed() const;
    /// Names of failing gating checks, comma separated.
    std::string failures() const;
    std::string to_json(const config::RunConfig& cfg) const;
};

/// Runs the collapse oracle against the closed forms.
ValidationReport cmd_validate(const config::RunConfig& cfg);

/// (x, tree-level width, Re Pi, Im Pi, spectral function, ...) over the configured x grid.
CurveFile cmd_qft(const config::RunConfig& cfg);

/// Runs one command and writes its files into cfg.output_dir. Returns 0, or 4 when
/// validation fails. Errors propagate as exceptions.
int run(std::string_view command, const config::RunConfig& cfg, std::ostream& log);

} // namespace zeno::commands

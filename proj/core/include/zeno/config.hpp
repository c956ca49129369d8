#pragma once

// Run configuration: flat `section.key = value` lines, `#` starts a comment.
//
//   exponential.gamma = 1
//   detector.lambda = 0.5        # "inf" selects a perfect detector
//   schedule.tau = 0.1
//   schedule.n = 50
//
// Exactly one model section (qm, exponential, qft) must be present.

#include "zeno/bang_bang.hpp"
#include "zeno/collapse_oracle.hpp"
#include "zeno/numerics.hpp"
#include "zeno/qft_model.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace zeno::config {

struct QmParams {
    double bare_mass = 0.0;
    double half_width = 1.0;
    double coupling = 0.1;
    std::optional<double> window_center;

    bool operator==(const QmParams&) const = default;
};

using ModelSection = std::variant<QmParams, bang_bang::ExponentialDecay, qft::QftModel>;

struct ScheduleSection {
    std::optional<double> interval;
    std::optional<int> pulses;
    std::optional<double> total_time;
    std::vector<double> interval_list;

    bool operator==(const ScheduleSection&) const = default;
};

struct RunConfig {
    ModelSection model;
    std::optional<bang_bang::DetectorBand> detector;
    ScheduleSection schedule;
    std::vector<double> grid;  ///< t values (survival) or x values (qft)
    numerics::QuadratureSpec numerics;
    collapse::KLattice lattice;
    std::uint64_t seed = 0;
    long trials = 0;
    std::filesystem::path output_dir = ".";
    std::string provenance;  ///< "derived" for reconstructed parameter sets

    bool operator==(const RunConfig&) const = default;
};

/// One `key = value` assignment with the line it came from.
struct Entry {
    std::string value;
    int line = 0;
};

using Entries = std::map<std::string, Entry>;

/// Splits text into entries. Throws ConfigError on malformed or duplicate lines.
Entries parse_entries(std::string_view text);

/// Later entries win.
Entries merge(Entries base, const Entries& overrides);

/// Throws ConfigError naming the field (and line) for unknown keys, bad numbers,
/// out-of-range values, and a missing or duplicated model section.
RunConfig build(const Entries& entries);

RunConfig parse(std::string_view text);

std::string read_file(const std::filesystem::path& path);

/// Physics keys (model, detector, schedule) with values printed to 17 significant digits.
std::vector<std::pair<std::string, std::string>> physics_entries(const RunConfig& cfg);

std::string format_double(double v);

/// Built-in preset text, identical to presets/<name>.conf. Throws ConfigError if unknown.
std::string_view preset_text(std::string_view name);
std::vector<std::string> preset_names();

} // namespace zeno::config

#include "zeno/config.hpp"

#include "zeno/errors.hpp"

#include <array>

namespace zeno::config {

namespace {

struct Preset {
    std::string_view name;
    std::string_view text;
};

// Keep in sync with presets/*.conf; a test compares them.
constexpr std::array kPresets{
    Preset{"fig1-left", R"(# No-click probability near 0.90 at t = 5/Gamma with frequent pulses.
# The band half-width is reconstructed by inverting the no-click formula.
exponential.gamma = 1
exponential.bare_mass = 0
detector.lambda = 3.1724129470048603
detector.center = 0
schedule.tau = 0.1
schedule.n = 50
meta.provenance = derived
)"},
    Preset{"fig1-right", R"(# No-click probability near 0.20 at t = 5/Gamma with sparse pulses.
# The band half-width is reconstructed by inverting the no-click formula.
exponential.gamma = 1
exponential.bare_mass = 0
detector.lambda = 3.5387880982804032
detector.center = 0
schedule.tau = 1
schedule.n = 5
meta.provenance = derived
)"},
    Preset{"perfect-detector", R"(# Every decay product is detected; the no-click curve equals exp(-Gamma t).
exponential.gamma = 1
exponential.bare_mass = 0
detector.lambda = inf
detector.center = 0
schedule.tau = 0.1
schedule.n = 50
)"},
    Preset{"zeno-freeze", R"(# No-click probability at t_total as the pulse interval shrinks.
exponential.gamma = 1
exponential.bare_mass = 0
detector.lambda = 1
detector.center = 0
schedule.tau = 0.5
schedule.n = 10
schedule.t_total = 5
schedule.tau_list = 0.01, 0.05, 0.1, 0.5, 1
)"},
    Preset{"qm-exponential-limit", R"(# Flat-window Lee model with L = 1000 g^2; survival follows exp(-Gamma_BW t).
qm.bare_mass = 0
qm.half_width = 10
qm.coupling = 0.1
grid.start = 0
grid.stop = 500
grid.points = 101
)"},
    Preset{"qft-demo", R"(# One-loop scalar resonance with a sharp momentum cutoff.
qft.bare_mass = 1
qft.product_mass = 0.2
qft.coupling = 0.3
qft.cutoff = 3
grid.start = 0.03
grid.stop = 2.5
grid.points = 39
)"},
    Preset{"validate-default", R"(# Collapse oracle against the closed forms on the reference lattice.
exponential.gamma = 1
exponential.bare_mass = 0
detector.lambda = 1
detector.center = 0
schedule.tau = 0.5
schedule.n = 20
lattice.k_max = 200
lattice.n_points = 65536
run.seed = 20240601
run.trials = 100000
)"},
};

} // namespace

std::string_view preset_text(std::string_view name) {
    for (const auto& p : kPresets) {
        if (p.name == name) return p.text;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'", "preset");
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : kPresets) out.emplace_back(p.name);
    return out;
}

} // namespace zeno::config

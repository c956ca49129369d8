#include "zeno/config.hpp"

#include "zeno/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace zeno::config {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& key, const Entry& e, const std::string& why) {
    std::ostringstream msg;
    msg << "line " << e.line << ": " << key << ": " << why;
    throw ConfigError(msg.str(), key, e.line);
}

double to_double(const std::string& key, const Entry& e, bool allow_inf = false) {
    const std::string_view v = e.value;
    if (allow_inf && (v == "inf" || v == "infinity" || v == "+inf")) {
        return std::numeric_limits<double>::infinity();
    }
    double out = 0.0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || end != v.data() + v.size() || !std::isfinite(out)) {
        fail(key, e, "expected a finite number, got '" + e.value + "'");
    }
    return out;
}

template <class Int>
Int to_integer(const std::string& key, const Entry& e) {
    const std::string_view v = e.value;
    Int out{};
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || end != v.data() + v.size()) {
        fail(key, e, "expected an integer, got '" + e.value + "'");
    }
    return out;
}

std::vector<double> to_list(const std::string& key, const Entry& e) {
    std::vector<double> out;
    std::string_view rest = e.value;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = trim(rest.substr(0, comma));
        if (item.empty()) fail(key, e, "empty list element");
        out.push_back(to_double(key, Entry{std::string(item), e.line}));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

double positive(const std::string& key, const Entry& e) {
    const double v = to_double(key, e);
    if (!(v > 0.0)) fail(key, e, "must be > 0");
    return v;
}

double non_negative(const std::string& key, const Entry& e) {
    const double v = to_double(key, e);
    if (!(v >= 0.0)) fail(key, e, "must be >= 0");
    return v;
}

struct GridSpec {
    std::optional<double> start, stop;
    std::optional<long> points;
    std::optional<std::vector<double>> values;
};

struct Builder {
    RunConfig cfg;
    QmParams qm;
    bang_bang::ExponentialDecay exponential;
    qft::QftModel qft;
    bang_bang::DetectorBand detector;
    bool has_detector = false;
    GridSpec grid;
};

using Setter = std::function<void(Builder&, const std::string&, const Entry&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"qm.bare_mass", [](Builder& b, auto& k, auto& e) { b.qm.bare_mass = to_double(k, e); }},
        {"qm.half_width", [](Builder& b, auto& k, auto& e) { b.qm.half_width = positive(k, e); }},
        {"qm.coupling", [](Builder& b, auto& k, auto& e) { b.qm.coupling = positive(k, e); }},
        {"qm.window_center", [](Builder& b, auto& k, auto& e) { b.qm.window_center = to_double(k, e); }},
        {"exponential.gamma", [](Builder& b, auto& k, auto& e) { b.exponential.width = positive(k, e); }},
        {"exponential.bare_mass", [](Builder& b, auto& k, auto& e) { b.exponential.bare_mass = to_double(k, e); }},
        {"qft.bare_mass", [](Builder& b, auto& k, auto& e) { b.qft.bare_mass = positive(k, e); }},
        {"qft.product_mass", [](Builder& b, auto& k, auto& e) { b.qft.product_mass = non_negative(k, e); }},
        {"qft.coupling", [](Builder& b, auto& k, auto& e) { b.qft.coupling = positive(k, e); }},
        {"qft.cutoff", [](Builder& b, auto& k, auto& e) { b.qft.cutoff = positive(k, e); }},
        {"detector.lambda",
         [](Builder& b, auto& k, auto& e) {
             b.detector.half_width = to_double(k, e, true);
             if (!(b.detector.half_width >= 0.0)) fail(k, e, "must be >= 0");
             b.has_detector = true;
         }},
        {"detector.center",
         [](Builder& b, auto& k, auto& e) {
             b.detector.center = to_double(k, e);
             b.has_detector = true;
         }},
        {"schedule.tau", [](Builder& b, auto& k, auto& e) { b.cfg.schedule.interval = positive(k, e); }},
        {"schedule.n",
         [](Builder& b, auto& k, auto& e) {
             const int n = to_integer<int>(k, e);
             if (n < 1) fail(k, e, "must be >= 1");
             b.cfg.schedule.pulses = n;
         }},
        {"schedule.t_total", [](Builder& b, auto& k, auto& e) { b.cfg.schedule.total_time = positive(k, e); }},
        {"schedule.tau_list",
         [](Builder& b, auto& k, auto& e) {
             auto list = to_list(k, e);
             for (double v : list) {
                 if (!(v > 0.0)) fail(k, e, "every interval must be > 0");
             }
             b.cfg.schedule.interval_list = std::move(list);
         }},
        {"grid.start", [](Builder& b, auto& k, auto& e) { b.grid.start = to_double(k, e); }},
        {"grid.stop", [](Builder& b, auto& k, auto& e) { b.grid.stop = to_double(k, e); }},
        {"grid.points",
         [](Builder& b, auto& k, auto& e) {
             const long n = to_integer<long>(k, e);
             if (n < 0) fail(k, e, "must be >= 0");
             b.grid.points = n;
         }},
        {"grid.values",
         [](Builder& b, auto& k, auto& e) { b.grid.values = e.value.empty() ? std::vector<double>{} : to_list(k, e); }},
        {"numerics.abs_tol", [](Builder& b, auto& k, auto& e) { b.cfg.numerics.abs_tol = positive(k, e); }},
        {"numerics.rel_tol", [](Builder& b, auto& k, auto& e) { b.cfg.numerics.rel_tol = positive(k, e); }},
        {"numerics.max_subdivisions",
         [](Builder& b, auto& k, auto& e) {
             const int n = to_integer<int>(k, e);
             if (n < 1) fail(k, e, "must be >= 1");
             b.cfg.numerics.max_subdivisions = n;
         }},
        {"lattice.k_max", [](Builder& b, auto& k, auto& e) { b.cfg.lattice.k_max = positive(k, e); }},
        {"lattice.n_points",
         [](Builder& b, auto& k, auto& e) {
             const auto n = to_integer<std::size_t>(k, e);
             if (n < 2) fail(k, e, "must be >= 2");
             b.cfg.lattice.n_points = n;
         }},
        {"run.seed", [](Builder& b, auto& k, auto& e) { b.cfg.seed = to_integer<std::uint64_t>(k, e); }},
        {"run.trials",
         [](Builder& b, auto& k, auto& e) {
             const long n = to_integer<long>(k, e);
             if (n < 0) fail(k, e, "must be >= 0");
             b.cfg.trials = n;
         }},
        {"output.dir",
         [](Builder& b, auto& k, auto& e) {
             if (e.value.empty()) fail(k, e, "must not be empty");
             b.cfg.output_dir = e.value;
         }},
        {"meta.provenance", [](Builder& b, auto&, auto& e) { b.cfg.provenance = e.value; }},
    };
    return table;
}

std::vector<double> expand_grid(const GridSpec& g, const Entries& entries) {
    if (g.values) {
        if (g.start || g.stop || g.points) {
            const auto& e = entries.at("grid.values");
            fail("grid.values", e, "cannot be combined with grid.start/stop/points");
        }
        return *g.values;
    }
    if (!g.start && !g.stop && !g.points) return {};
    for (const char* key : {"grid.start", "grid.stop", "grid.points"}) {
        if (!entries.count(key)) {
            throw ConfigError(std::string("missing ") + key + " (grid.start, grid.stop and grid.points go together)", key);
        }
    }
    const long n = *g.points;
    if (n == 0) return {};
    if (n == 1) return {*g.start};
    if (!(*g.stop > *g.start)) fail("grid.stop", entries.at("grid.stop"), "must exceed grid.start");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double step = (*g.stop - *g.start) / static_cast<double>(n - 1);
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = *g.start + step * static_cast<double>(i);
    out.back() = *g.stop;
    return out;
}

} // namespace

Entries parse_entries(std::string_view text) {
    Entries out;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'", {}, line_no);
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key", {}, line_no);
        if (out.count(key)) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": duplicate key", key, line_no);
        }
        out.emplace(key, Entry{value, line_no});
    }
    return out;
}

Entries merge(Entries base, const Entries& overrides) {
    for (const auto& [k, v] : overrides) base[k] = v;
    return base;
}

RunConfig build(const Entries& entries) {
    Builder b;
    const auto& table = setters();
    bool has_qm = false, has_exp = false, has_qft = false;
    for (const auto& [key, entry] : entries) {
        const auto it = table.find(key);
        if (it == table.end()) fail(key, entry, "unknown key");
        it->second(b, key, entry);
        has_qm |= key.starts_with("qm.");
        has_exp |= key.starts_with("exponential.");
        has_qft |= key.starts_with("qft.");
    }
    const int sections = int(has_qm) + int(has_exp) + int(has_qft);
    if (sections == 0) throw ConfigError("no model section: expected one of qm.*, exponential.*, qft.*", "model");
    if (sections > 1) throw ConfigError("more than one model section (qm, exponential, qft) present", "model");

    if (has_qm) {
        b.cfg.model = b.qm;
    } else if (has_exp) {
        b.cfg.model = b.exponential;
    } else {
        b.cfg.model = b.qft;
    }
    if (b.has_detector) b.cfg.detector = b.detector;
    b.cfg.grid = expand_grid(b.grid, entries);
    return b.cfg;
}

RunConfig parse(std::string_view text) { return build(parse_entries(text)); }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string(), "config");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::pair<std::string, std::string>> physics_entries(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, QmParams>) {
                out.emplace_back("qm.bare_mass", format_double(m.bare_mass));
                out.emplace_back("qm.half_width", format_double(m.half_width));
                out.emplace_back("qm.coupling", format_double(m.coupling));
                if (m.window_center) out.emplace_back("qm.window_center", format_double(*m.window_center));
            } else if constexpr (std::is_same_v<T, bang_bang::ExponentialDecay>) {
                out.emplace_back("exponential.gamma", format_double(m.width));
                out.emplace_back("exponential.bare_mass", format_double(m.bare_mass));
            } else {
                out.emplace_back("qft.bare_mass", format_double(m.bare_mass));
                out.emplace_back("qft.product_mass", format_double(m.product_mass));
                out.emplace_back("qft.coupling", format_double(m.coupling));
                out.emplace_back("qft.cutoff", format_double(m.cutoff));
            }
        },
        cfg.model);
    if (cfg.detector) {
        out.emplace_back("detector.lambda", format_double(cfg.detector->half_width));
        out.emplace_back("detector.center", format_double(cfg.detector->center));
    }
    const auto& s = cfg.schedule;
    if (s.interval) out.emplace_back("schedule.tau", format_double(*s.interval));
    if (s.pulses) out.emplace_back("schedule.n", std::to_string(*s.pulses));
    if (s.total_time) out.emplace_back("schedule.t_total", format_double(*s.total_time));
    if (!s.interval_list.empty()) {
        std::string list;
        for (double v : s.interval_list) {
            if (!list.empty()) list += ", ";
            list += format_double(v);
        }
        out.emplace_back("schedule.tau_list", list);
    }
    return out;
}

} // namespace zeno::config

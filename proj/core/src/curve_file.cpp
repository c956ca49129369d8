#include "zeno/curve_file.hpp"

#include "zeno/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace zeno {

namespace {

constexpr std::string_view kPhysicsPrefixes[] = {"qm.", "exponential.", "qft.", "detector.", "schedule."};

bool is_physics_key(std::string_view key) {
    return std::any_of(std::begin(kPhysicsPrefixes), std::end(kPhysicsPrefixes),
                       [&](std::string_view p) { return key.starts_with(p); });
}

double parse_cell(std::string_view cell, std::size_t line) {
    if (cell == "inf") return HUGE_VAL;
    if (cell == "-inf") return -HUGE_VAL;
    if (cell == "nan") return std::nan("");
    double v = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || end != cell.data() + cell.size()) {
        throw DomainError("csv line " + std::to_string(line) + ": bad number '" + std::string(cell) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        const auto pos = line.find(sep);
        out.push_back(line.substr(0, pos));
        if (pos == std::string_view::npos) break;
        line = line.substr(pos + 1);
    }
    return out;
}

} // namespace

void CurveFile::add_meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
}

std::optional<std::string> CurveFile::meta(std::string_view key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::size_t CurveFile::column_index(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw DomainError("curve has no column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> CurveFile::column(std::string_view name) const {
    const auto idx = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[idx]);
    return out;
}

void CurveFile::validate() const {
    if (columns.empty()) throw DomainError("curve has no columns");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != columns.size()) {
            throw DomainError("curve row " + std::to_string(i) + " has the wrong number of values");
        }
        if (i > 0 && !(rows[i][0] > rows[i - 1][0])) {
            throw DomainError("curve abscissa '" + columns[0] + "' is not strictly increasing at row " +
                              std::to_string(i));
        }
    }
    for (const auto& name : probability_columns) {
        const auto idx = column_index(name);
        for (const auto& r : rows) {
            if (!(r[idx] >= 0.0 && r[idx] <= 1.0 + kProbabilitySlack)) {
                throw DomainError("probability column '" + name + "' leaves [0, 1]: " +
                                  config::format_double(r[idx]));
            }
        }
    }
}

std::string to_csv(const CurveFile& curve) {
    std::string out;
    for (const auto& [k, v] : curve.metadata) out += "# " + k + ": " + v + "\n";
    for (std::size_t i = 0; i < curve.columns.size(); ++i) {
        if (i) out += ',';
        out += curve.columns[i];
    }
    out += '\n';
    for (const auto& row : curve.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += config::format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

CurveFile parse_csv(std::string_view text) {
    CurveFile out;
    bool have_header = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line.starts_with("# ")) {
            if (have_header) throw DomainError("csv line " + std::to_string(line_no) + ": metadata after header");
            const auto colon = line.find(": ");
            if (colon == std::string_view::npos) {
                throw DomainError("csv line " + std::to_string(line_no) + ": metadata without ': '");
            }
            out.add_meta(std::string(line.substr(2, colon - 2)), std::string(line.substr(colon + 2)));
        } else if (!have_header) {
            for (auto c : split(line, ',')) out.columns.emplace_back(c);
            have_header = true;
        } else {
            std::vector<double> row;
            for (auto c : split(line, ',')) row.push_back(parse_cell(c, line_no));
            out.rows.push_back(std::move(row));
        }
    }
    if (!have_header) throw DomainError("csv has no column header");
    return out;
}

config::RunConfig physics_from_header(const CurveFile& curve) {
    config::Entries entries;
    int line = 0;
    for (const auto& [k, v] : curve.metadata) {
        ++line;
        if (is_physics_key(k)) entries[k] = {v, line};
    }
    return config::build(entries);
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw ConfigError("cannot create output directory " + path.parent_path().string() + ": " + ec.message(), "output.dir");
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string(), "output.dir");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw ConfigError("write failed for " + tmp.string(), "output.dir");
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw ConfigError("cannot move " + tmp.string() + " into place: " + ec.message(), "output.dir");
    }
}

} // namespace zeno

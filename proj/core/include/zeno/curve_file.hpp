#pragma once

// CSV curve files:
//
//   # key: value            metadata, one per line
//   t,p_no_click,p_survival  column header
//   0,1,1                    rows, %.17g
//
// The first column is the abscissa and must be strictly increasing.

#include "zeno/config.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zeno {

struct CurveFile {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    /// Columns whose values are probabilities, checked to lie in [0, 1 + 1e-8].
    std::vector<std::string> probability_columns;

    void add_meta(std::string key, std::string value);
    std::optional<std::string> meta(std::string_view key) const;
    std::size_t column_index(std::string_view name) const;
    std::vector<double> column(std::string_view name) const;

    /// Throws DomainError on ragged rows, a non-increasing abscissa, or probabilities
    /// outside [0, 1 + 1e-8].
    void validate() const;
};

inline constexpr double kProbabilitySlack = 1e-8;

std::string to_csv(const CurveFile& curve);

/// Inverse of to_csv. Probability columns are not recorded in the file.
CurveFile parse_csv(std::string_view text);

/// Rebuilds the physics part of a RunConfig (model, detector, schedule) from metadata.
config::RunConfig physics_from_header(const CurveFile& curve);

/// Writes through a temporary file in the same directory followed by a rename.
void write_atomic(const std::filesystem::path& path, std::string_view content);

} // namespace zeno

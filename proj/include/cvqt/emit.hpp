#pragma once

#include <array>
#include <span>
#include <string>

#include "cvqt/config.hpp"
#include "cvqt/experiments.hpp"
#include "cvqt/linalg.hpp"

namespace cvqt {

inline constexpr std::array<const char*, 11> kColumns = {
    "experiment", "input", "N", "lambda", "param_name", "param_value",
    "epsilon", "fidelity", "mean", "std", "diagnostics"};

/// Header line plus one line per row; reals as %.12g, absent values empty.
std::string to_csv(const ResultTable& table);
/// Array of objects keyed by kColumns; absent values are null.
std::string to_json(const ResultTable& table);
/// Inverse of to_csv (wall times are not stored and come back as zero).
ResultTable parse_csv(const std::string& text);

/// Writes the table to `path`, or standard output when it is empty.
/// I/O failures raise Error naming the path.
void emit(const ResultTable& table, OutputFormat format, const std::string& path);

/// Text dump: "# dim rows cols" and "# grid ..." headers, then one
/// whitespace-separated matrix row per line.
void write_grid_dump(const std::string& path, const RMatrix& values, std::span<const double> qgrid,
                     std::span<const double> pgrid, const std::string& title);
void write_state_dump(const std::string& path, const CVector& amps, const std::string& title);

}  // namespace cvqt

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qsim/middleware/trace.hpp"

namespace qsim {

inline constexpr std::string_view kCsvHeader =
    "t,x,y,z,vx,vy,vz,phi,theta,psi,p,q,r,w1,w2,w3,w4";
inline constexpr std::size_t kCsvColumns = 17;

using CsvRow = std::array<double, kCsvColumns>;

CsvRow to_csv_row(const TraceSample& s);

/// Header plus one row per sample, 17 significant digits.  Throws a fault
/// with FaultKind::io on an empty trace.
std::string format_csv(const Trace& trace);

/// Writes format_csv(trace).  No file is created for an empty trace.
void emit_csv(const Trace& trace, const std::filesystem::path& path);

std::vector<CsvRow> read_csv(const std::filesystem::path& path);

/// Column index by header name, or throws.
std::size_t csv_column(std::string_view name);

}  // namespace qsim

#include "qsim/harness/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qsim/fault.hpp"

namespace qsim {

CsvRow to_csv_row(const TraceSample& s) {
  const VehicleState& st = s.state;
  return {st.t,
          st.position.x(), st.position.y(), st.position.z(),
          st.velocity.x(), st.velocity.y(), st.velocity.z(),
          st.attitude.roll, st.attitude.pitch, st.attitude.yaw,
          st.body_rates.x(), st.body_rates.y(), st.body_rates.z(),
          s.command[0], s.command[1], s.command[2], s.command[3]};
}

std::string format_csv(const Trace& trace) {
  if (trace.samples.empty()) throw Fault(FaultKind::io, "refusing to write CSV for an empty trace");
  std::string out;
  out.reserve((trace.samples.size() + 1) * kCsvColumns * 24);
  out.append(kCsvHeader);
  out.push_back('\n');
  char buf[32];
  for (const TraceSample& s : trace.samples) {
    const CsvRow row = to_csv_row(s);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      const auto res = std::to_chars(buf, buf + sizeof(buf), row[i], std::chars_format::general, 17);
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

void emit_csv(const Trace& trace, const std::filesystem::path& path) {
  const std::string text = format_csv(trace);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Fault(FaultKind::io, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw Fault(FaultKind::io, "write to " + path.string() + " failed");
}

std::vector<CsvRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Fault(FaultKind::io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Fault(FaultKind::io, path.string() + ": unexpected CSV header");
  }
  std::vector<CsvRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    CsvRow row{};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t i = 0; i < kCsvColumns; ++i) {
      const auto res = std::from_chars(p, end, row[i]);
      const bool last = i + 1 == kCsvColumns;
      if (res.ec != std::errc() || (last ? res.ptr != end : (res.ptr == end || *res.ptr != ','))) {
        throw Fault(FaultKind::io, path.string() + ": malformed row at line " + std::to_string(line_no));
      }
      p = res.ptr + 1;
    }
    rows.push_back(row);
  }
  return rows;
}

std::size_t csv_column(std::string_view name) {
  std::size_t index = 0;
  std::size_t start = 0;
  while (start <= kCsvHeader.size()) {
    const auto comma = kCsvHeader.find(',', start);
    if (kCsvHeader.substr(start, comma - start) == name) return index;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
    ++index;
  }
  throw Fault(FaultKind::configuration, "no CSV column named '" + std::string(name) + "'");
}

}  // namespace qsim

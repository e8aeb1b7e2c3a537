#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "qsim/fault.hpp"
#include "qsim/harness/csv.hpp"
#include "qsim/harness/runner.hpp"

namespace qsim {
namespace {

namespace fs = std::filesystem;

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("qsim_csv_test_" + name);
}

Trace small_run() {
  ScenarioConfig cfg = parse_scenario("setpoint.0.t = 0\nsetpoint.0.z_des = 2\nsetpoint.0.psi_des = 0.1\n");
  return run_scenario(cfg);
}

TEST(CsvTest, HeaderAndRowCount) {
  const std::string text = format_csv(small_run());
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1502);
}

TEST(CsvTest, RowLayout) {
  TraceSample s;
  s.state.t = 1.5;
  s.state.position = {1, 2, 3};
  s.state.velocity = {4, 5, 6};
  s.state.attitude = {0.1, 0.2, 0.3};
  s.state.body_rates = {7, 8, 9};
  s.command.w = {10, 11, 12, 13};
  const CsvRow row = to_csv_row(s);
  const CsvRow expected = {1.5, 1, 2, 3, 4, 5, 6, 0.1, 0.2, 0.3, 7, 8, 9, 10, 11, 12, 13};
  EXPECT_EQ(row, expected);
  EXPECT_EQ(csv_column("theta"), 8u);
  EXPECT_EQ(csv_column("w4"), 16u);
  EXPECT_THROW(csv_column("nope"), Fault);
}

TEST(CsvTest, ReloadIsExact) {
  const Trace trace = small_run();
  const fs::path path = temp_path("reload.csv");
  emit_csv(trace, path);
  const auto rows = read_csv(path);
  ASSERT_EQ(rows.size(), trace.samples.size());
  for (std::size_t i = 0; i < rows.size(); ++i) ASSERT_EQ(rows[i], to_csv_row(trace.samples[i]));
  fs::remove(path);
}

TEST(CsvTest, EmptyTraceWritesNothing) {
  const fs::path path = temp_path("empty.csv");
  fs::remove(path);
  try {
    emit_csv(Trace{}, path);
    FAIL();
  } catch (const Fault& f) {
    EXPECT_EQ(f.kind(), FaultKind::io);
  }
  EXPECT_FALSE(fs::exists(path));
}

TEST(CsvTest, MalformedFileFaults) {
  const fs::path path = temp_path("bad.csv");
  std::ofstream(path) << "t,x\n1,2\n";
  EXPECT_THROW(read_csv(path), Fault);
  std::ofstream(path) << kCsvHeader << "\n1,2,3\n";
  EXPECT_THROW(read_csv(path), Fault);
  fs::remove(path);
}

}  // namespace
}  // namespace qsim

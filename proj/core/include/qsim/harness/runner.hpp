#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsim/harness/scenario.hpp"
#include "qsim/middleware/trace.hpp"

namespace qsim {

/// Wires plant and controller through the configured transport, runs for the
/// configured duration and, if cfg.output_csv is set, writes the CSV (also for
/// a faulted run, which leaves a partial trace).
Trace run_scenario(const ScenarioConfig& cfg);

/// A single signal cut from a trace at the last setpoint change.
struct SignalStep {
  std::vector<double> t;
  std::vector<double> y;
  double setpoint = 0.0;
  double initial = 0.0;
};

/// `signal` is one of z, phi, theta, psi.  The step starts at the last
/// schedule entry; the initial value is the signal at that instant.
SignalStep extract_step(const Trace& trace, const std::vector<ScheduledSetpoint>& schedule,
                        std::string_view signal);

struct StreamComparison {
  bool equivalent = false;
  std::size_t compared = 0;
  std::size_t mismatches = 0;
  double max_relative_error = 0.0;
  std::string detail;
};

/// Checks that every command in `candidate` matches a command of `reference`
/// issued within `slack_ns` of it, to `rel_tol` relative error per speed.
StreamComparison compare_command_streams(std::span<const CommandRecord> reference,
                                         std::span<const CommandRecord> candidate,
                                         std::int64_t slack_ns, double rel_tol);

}  // namespace qsim

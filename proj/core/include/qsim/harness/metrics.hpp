#pragma once

#include <optional>
#include <span>

namespace qsim {

/// Step-response figures.  Times are measured from the first sample.
struct StepMetrics {
  double peak_value = 0.0;
  double peak_time_s = 0.0;
  double overshoot_pct = 0.0;
  std::optional<double> settling_time_s;  // 2 % band; empty if never settled
  std::optional<double> rise_time_s;      // 10 % -> 90 % of the span
  std::optional<double> rise95_time_s;    // first reach of 95 % of the span
  double steady_state_error = 0.0;        // |setpoint - mean of final 1 s|
};

inline constexpr double kSettlingBand = 0.02;

/// Throws a configuration fault if setpoint == initial, the series lengths
/// differ, or fewer than two samples are given.  Threshold crossings are
/// linearly interpolated between samples.
StepMetrics step_metrics(std::span<const double> t, std::span<const double> y, double setpoint,
                         double initial);

}  // namespace qsim

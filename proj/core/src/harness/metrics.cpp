#include "qsim/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qsim/fault.hpp"

namespace qsim {

namespace {

double lerp_time(std::span<const double> t, const std::vector<double>& u, std::size_t i,
                 double level) {
  const double du = u[i] - u[i - 1];
  const double frac = du == 0.0 ? 0.0 : (level - u[i - 1]) / du;
  return t[i - 1] + frac * (t[i] - t[i - 1]);
}

// First time the normalised signal reaches `level`.
std::optional<double> first_reach(std::span<const double> t, const std::vector<double>& u,
                                  double level) {
  if (u[0] >= level) return t[0];
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (u[i] >= level) return lerp_time(t, u, i, level);
  }
  return std::nullopt;
}

}  // namespace

StepMetrics step_metrics(std::span<const double> t, std::span<const double> y, double setpoint,
                         double initial) {
  if (t.size() != y.size() || t.size() < 2) {
    throw Fault(FaultKind::configuration, "step_metrics needs two equal-length series of >= 2 samples");
  }
  const double span = setpoint - initial;
  if (span == 0.0 || !std::isfinite(span)) {
    throw Fault(FaultKind::configuration, "step_metrics: setpoint equals initial value, span undefined");
  }

  std::vector<double> u(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) u[i] = (y[i] - initial) / span;

  const double t0 = t.front();
  StepMetrics m;

  std::size_t peak = 0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    if (u[i] > u[peak]) peak = i;
  }
  m.peak_value = y[peak];
  m.peak_time_s = t[peak] - t0;
  m.overshoot_pct = std::max(0.0, 100.0 * (u[peak] - 1.0));

  const auto r10 = first_reach(t, u, 0.1);
  const auto r90 = first_reach(t, u, 0.9);
  if (r10 && r90) m.rise_time_s = *r90 - *r10;
  if (const auto r95 = first_reach(t, u, 0.95)) m.rise95_time_s = *r95 - t0;

  std::optional<std::size_t> last_outside;
  for (std::size_t i = u.size(); i-- > 0;) {
    if (std::abs(u[i] - 1.0) > kSettlingBand) {
      last_outside = i;
      break;
    }
  }
  if (!last_outside) {
    m.settling_time_s = 0.0;
  } else if (*last_outside + 1 < u.size()) {
    const std::size_t j = *last_outside + 1;
    const double edge = u[j - 1] > 1.0 ? 1.0 + kSettlingBand : 1.0 - kSettlingBand;
    m.settling_time_s = lerp_time(t, u, j, edge) - t0;
  }

  const double window_start = t.back() - 1.0 - 1e-9;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (t[i] >= window_start) {
      sum += y[i];
      ++count;
    }
  }
  m.steady_state_error = std::abs(setpoint - sum / static_cast<double>(count));
  return m;
}

}  // namespace qsim

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qsim/fault.hpp"
#include "qsim/harness/metrics.hpp"

namespace qsim {
namespace {

struct Series {
  std::vector<double> t, y;
};

template <class F>
Series sample(F f, double duration, double dt) {
  Series s;
  const auto n = static_cast<std::size_t>(std::llround(duration / dt));
  for (std::size_t i = 0; i <= n; ++i) {
    s.t.push_back(static_cast<double>(i) * dt);
    s.y.push_back(f(s.t.back()));
  }
  return s;
}

TEST(StepMetricsTest, UnderdampedSecondOrder) {
  const double zeta = 0.48, wn = 1.5, wd = wn * std::sqrt(1 - zeta * zeta);
  const auto s = sample(
      [&](double t) {
        return 1 - std::exp(-zeta * wn * t) *
                       (std::cos(wd * t) + zeta / std::sqrt(1 - zeta * zeta) * std::sin(wd * t));
      },
      30.0, 1e-3);
  const StepMetrics m = step_metrics(s.t, s.y, 1.0, 0.0);
  // 100 exp(-zeta pi / sqrt(1 - zeta^2))
  EXPECT_NEAR(m.overshoot_pct, 17.925757503511456, 1e-4);
  EXPECT_NEAR(m.peak_time_s, M_PI / wd, 1e-3);
  EXPECT_LT(m.steady_state_error, 1e-6);
  ASSERT_TRUE(m.settling_time_s);
  EXPECT_GT(*m.settling_time_s, 3.0);
  EXPECT_LT(*m.settling_time_s, 4.0 / (zeta * wn) + 0.5);
}

TEST(StepMetricsTest, FirstOrderTimes) {
  const double tau = 0.7;
  const auto s = sample([&](double t) { return 1 - std::exp(-t / tau); }, 10.0, 1e-3);
  const StepMetrics m = step_metrics(s.t, s.y, 1.0, 0.0);
  EXPECT_NEAR(m.overshoot_pct, 0.0, 1e-12);
  ASSERT_TRUE(m.settling_time_s && m.rise_time_s && m.rise95_time_s);
  EXPECT_NEAR(*m.settling_time_s, -std::log(0.02) * tau, 1e-5);
  EXPECT_NEAR(*m.rise_time_s, std::log(9.0) * tau, 1e-5);
  EXPECT_NEAR(*m.rise95_time_s, -std::log(0.05) * tau, 1e-5);
}

TEST(StepMetricsTest, ConstantTraceNeverRises) {
  const auto s = sample([](double) { return 0.0; }, 5.0, 0.01);
  const StepMetrics m = step_metrics(s.t, s.y, 1.0, 0.0);
  EXPECT_FALSE(m.settling_time_s);
  EXPECT_FALSE(m.rise95_time_s);
  EXPECT_EQ(m.overshoot_pct, 0.0);
  EXPECT_NEAR(m.steady_state_error, 1.0, 1e-12);
}

TEST(StepMetricsTest, RejectsDegenerateInput) {
  const std::vector<double> t = {0, 1}, y = {0, 1};
  EXPECT_THROW(step_metrics(t, y, 1.0, 1.0), Fault);
  EXPECT_THROW(step_metrics(t, std::vector<double>{0}, 1.0, 0.0), Fault);
  EXPECT_THROW(step_metrics(std::vector<double>{0}, std::vector<double>{0}, 1.0, 0.0), Fault);
}

TEST(StepMetricsTest, InvariantUnderShiftScaleAndSign) {
  const auto s = sample([](double t) { return 1 - std::exp(-t) * std::cos(2 * t); }, 10.0, 0.01);
  const StepMetrics base = step_metrics(s.t, s.y, 1.0, 0.0);

  std::vector<double> t_shift, y_map;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    t_shift.push_back(s.t[i] + 5.0);
    y_map.push_back(3.0 - 2.0 * s.y[i]);  // initial 3, setpoint 1, negative step
  }
  const StepMetrics mapped = step_metrics(t_shift, y_map, 1.0, 3.0);
  EXPECT_NEAR(mapped.overshoot_pct, base.overshoot_pct, 1e-9);
  EXPECT_NEAR(mapped.peak_time_s, base.peak_time_s, 1e-9);
  EXPECT_NEAR(*mapped.settling_time_s, *base.settling_time_s, 1e-9);
  EXPECT_NEAR(*mapped.rise95_time_s, *base.rise95_time_s, 1e-9);
  EXPECT_NEAR(mapped.steady_state_error, 2.0 * base.steady_state_error, 1e-12);
  EXPECT_NEAR(mapped.peak_value, 3.0 - 2.0 * base.peak_value, 1e-12);
}

}  // namespace
}  // namespace qsim

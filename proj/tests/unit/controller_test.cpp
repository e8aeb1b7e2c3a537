#include <cmath>
#include <random>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "qsim/control/controller.hpp"
#include "qsim/dynamics/plant.hpp"
#include "qsim/dynamics/rotation.hpp"
#include "qsim/fault.hpp"
#include "qsim/middleware/codec.hpp"
#include "test_support.hpp"

namespace qsim {
namespace {

const QuadParams kParams{};

SensorSnapshot snapshot_at(const EulerAngles& att, const Vec3& rates, double z, double vz,
                           std::int64_t received_ns = 0) {
  SensorSnapshot s;
  const Quaternion q = euler_to_quaternion(att);
  s.imu = ImuSample{q, rates, received_ns};
  s.pose = PoseSample{Vec3(0, 0, z), q, received_ns};
  s.velocity = VelocitySample{Vec3(0, 0, vz), received_ns};
  return s;
}

class ControllerTest : public ::testing::Test {
 protected:
  ControllerConfig cfg = default_controller_config(kParams);
  MotorAllocator alloc{kParams};
};

TEST(AttitudeMomentsTest, ProportionalOnly) {
  const AttitudeGains g{{1, 1}, {1, 1}, {1, 1}};
  const Vec3 m = attitude_moments({0, 0, 0}, Vec3::Zero(), {0, 0.1, 0, 0}, g);
  EXPECT_DOUBLE_EQ(m[0], 0.1);
  EXPECT_EQ(m[1], 0.0);
  EXPECT_EQ(m[2], 0.0);
}

TEST(AttitudeMomentsTest, ProportionalAndRateTerms) {
  const AttitudeGains g{{1, 1.01479}, {1, 1}, {1, 1}};
  const Vec3 m = attitude_moments({0.05, 0, 0}, Vec3(0.2, 0, 0), {0, 0.1, 0, 0}, g);
  EXPECT_NEAR(m[0], -0.152958, 1e-12);
}

TEST_F(ControllerTest, MissingImuGivesSafetyCommand) {
  SensorSnapshot s = snapshot_at({}, Vec3::Zero(), 0, 0);
  s.imu.reset();
  const TickOutput out = control_loop_tick(s, {}, cfg, kParams, alloc);
  EXPECT_EQ(out.path, TickPath::missing);
  EXPECT_EQ(out.speeds, cfg.safety_command);
}

TEST_F(ControllerTest, AtSetpointCommandsHover) {
  const TickOutput out = control_loop_tick(snapshot_at({}, Vec3::Zero(), 0, 0), {}, cfg, kParams, alloc);
  EXPECT_EQ(out.path, TickPath::nominal);
  for (double w : out.speeds.w) EXPECT_NEAR(w, hover_speed(kParams), 1e-9);
}

TEST_F(ControllerTest, NominalTickComposesControlLaws) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> small(-0.3, 0.3);
  cfg.schedule = {{0.0, {1.5, 0.05, -0.1, 0.2}}};
  for (int i = 0; i < 200; ++i) {
    const EulerAngles att{small(rng), small(rng), small(rng)};
    const Vec3 rates(small(rng), small(rng), small(rng));
    const double z = 1.5 + small(rng), vz = small(rng);
    const TickOutput out =
        control_loop_tick(snapshot_at(att, rates, z, vz), {}, cfg, kParams, alloc);
    ASSERT_EQ(out.path, TickPath::nominal);

    // Independent composition from the individual laws.
    const Setpoint& sp = cfg.schedule[0].setpoint;
    const double u1 = std::clamp(
        (kParams.weight() + cfg.altitude.kp * (sp.z_des - z) - cfg.altitude.kd * vz) /
            (std::cos(att.roll) * std::cos(att.pitch)),
        0.0, cfg.limits.thrust_max);
    const Vec3 m = attitude_moments(att, rates, sp, cfg.attitude);
    const Eigen::Vector4d sq = mixing_matrix(kParams).inverse() * Eigen::Vector4d(u1, m[0], m[1], m[2]);
    for (int k = 0; k < 4; ++k) {
      const double expected = std::min(std::sqrt(std::max(sq[k], 0.0)), cfg.limits.omega_max);
      ASSERT_NEAR(out.speeds[k], expected, 1e-9 * expected + 1e-9);
    }
    ASSERT_NEAR(out.demand.thrust, u1, 1e-12);
  }
}

TEST_F(ControllerTest, StaleInputGivesSafetyCommand) {
  const auto s = snapshot_at({}, Vec3::Zero(), 0, 0, 1'000'000'000);
  EXPECT_EQ(control_loop_tick(s, {1'100'000'000, 0}, cfg, kParams, alloc).path, TickPath::nominal);
  const TickOutput out = control_loop_tick(s, {1'100'000'001, 0}, cfg, kParams, alloc);
  EXPECT_EQ(out.path, TickPath::stale);
  EXPECT_EQ(out.speeds, cfg.safety_command);
}

TEST_F(ControllerTest, SafetyHoldsWhileInputStaysStale) {
  const auto s = snapshot_at({0.1, 0, 0}, Vec3(0.3, 0, 0), 4.0, 1.0, 0);
  for (std::int64_t now = 200'000'000; now < 2'000'000'000; now += 20'000'000) {
    const TickOutput out = control_loop_tick(s, {now, now}, cfg, kParams, alloc);
    ASSERT_EQ(out.path, TickPath::stale);
    ASSERT_EQ(out.speeds, cfg.safety_command);
  }
}

TEST_F(ControllerTest, EncodedCommandIsDeterministic) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 100; ++i) {
    const EulerAngles att = testing::random_attitude(rng, 0.5);
    const auto s = snapshot_at(att, Vec3(0.1, -0.2, 0.3), 2.0, -0.5);
    auto encode = [&] {
      const TickOutput out = control_loop_tick(s, {}, cfg, kParams, alloc);
      return encode_frame({TopicId::motor_commands, 7, 0, MotorCommandPayload{out.speeds.w}});
    };
    ASSERT_EQ(encode(), encode());
  }
}

TEST_F(ControllerTest, TiltGuardFallsBackToSafety) {
  const TickOutput out =
      control_loop_tick(snapshot_at({1.45, 0, 0}, Vec3::Zero(), 0, 0), {}, cfg, kParams, alloc);
  EXPECT_EQ(out.path, TickPath::tilt_guard);
  EXPECT_EQ(out.speeds, cfg.safety_command);
}

TEST_F(ControllerTest, OutputsRespectSpeedLimit) {
  cfg.schedule = {{0.0, {100.0, 0.4, -0.4, 3.0}}};
  const TickOutput out =
      control_loop_tick(snapshot_at({-0.5, 0.5, -3.0}, Vec3(-5, 5, -5), -10, -5), {}, cfg, kParams, alloc);
  for (double w : out.speeds.w) {
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, cfg.limits.omega_max);
  }
}

TEST(ActiveSetpointTest, SwitchesAtScheduledInstant) {
  const std::vector<ScheduledSetpoint> sched = {{0.0, {1, 0, 0, 0}}, {2.0, {5, 0, 0, 0}}};
  EXPECT_EQ(active_setpoint(sched, 1'999'999'999).z_des, 1.0);
  EXPECT_EQ(active_setpoint(sched, 2'000'000'000).z_des, 5.0);
  EXPECT_EQ(active_setpoint({}, 0).z_des, 0.0);
  EXPECT_EQ(active_setpoint({{0.5, {3, 0, 0, 0}}}, 0).z_des, 0.0);
}

TEST(ControllerConfigTest, RejectsInvalidSettings) {
  const ControllerConfig base = default_controller_config(kParams);
  EXPECT_NO_THROW(base.validate());
  auto expect_fault = [&](auto mutate) {
    ControllerConfig c = base;
    mutate(c);
    EXPECT_THROW(c.validate(), Fault);
  };
  expect_fault([](ControllerConfig& c) { c.rate_hz = 0; });
  expect_fault([](ControllerConfig& c) { c.staleness_budget_s = 0.001; });
  expect_fault([](ControllerConfig& c) { c.attitude.yaw.k2 = 0; });
  expect_fault([](ControllerConfig& c) { c.schedule = {{0, {0, 0.6, 0, 0}}}; });
  expect_fault([](ControllerConfig& c) { c.schedule = {{2, {}}, {1, {}}}; });
  expect_fault([](ControllerConfig& c) { c.safety_command.w[2] = -1; });
}

}  // namespace
}  // namespace qsim

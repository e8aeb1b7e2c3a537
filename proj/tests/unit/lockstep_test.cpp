#include <gtest/gtest.h>

#include "qsim/fault.hpp"
#include "qsim/middleware/codec.hpp"
#include "qsim/middleware/lockstep.hpp"

namespace qsim {
namespace {

struct Rig {
  QuadParams params;
  Bus bus;
  std::optional<PlantNode> plant;
  std::optional<ControllerNode> controller;

  explicit Rig(std::vector<ScheduledSetpoint> schedule = {}) {
    bus.register_all_topics();
    ControllerConfig cfg = default_controller_config(params);
    cfg.schedule = std::move(schedule);
    plant.emplace(bus, params, RotationalModel::full);
    controller.emplace(bus, params, cfg);
  }
  Trace run(const LockstepOptions& o) { return lockstep_run(*plant, *controller, bus, o); }
};

TEST(LockstepTest, CountsForFifteenSeconds) {
  Rig rig;
  const Trace t = rig.run({});
  EXPECT_EQ(t.plant_steps, 1500u);
  EXPECT_EQ(t.controller_ticks, 750u);
  EXPECT_EQ(t.samples.size(), 1501u);
  EXPECT_EQ(t.commands.size(), 750u);
  EXPECT_FALSE(t.fault);
  EXPECT_DOUBLE_EQ(t.samples.back().state.t, 15.0);
}

TEST(LockstepTest, ZeroDurationDoesNothing) {
  Rig rig;
  LockstepOptions o;
  o.duration_s = 0.0;
  const Trace t = rig.run(o);
  EXPECT_EQ(t.plant_steps, 0u);
  EXPECT_EQ(t.controller_ticks, 0u);
  EXPECT_TRUE(t.samples.empty());
}

TEST(LockstepTest, NonIntegerRateRatioFaults) {
  Rig rig;
  LockstepOptions o;
  o.controller_rate_hz = 30.0;
  try {
    rig.run(o);
    FAIL();
  } catch (const Fault& f) {
    EXPECT_EQ(f.kind(), FaultKind::configuration);
  }
  EXPECT_EQ(rate_ratio(100, 50), 2);
  EXPECT_EQ(rate_ratio(100, 100), 1);
  EXPECT_THROW(rate_ratio(50, 100), Fault);
}

TEST(LockstepTest, MessageLogIsByteIdenticalAcrossRuns) {
  const std::vector<ScheduledSetpoint> sched = {{0.0, {10.0, 0.05, -0.05, 0.1}}};
  Rig a(sched), b(sched);
  const Trace ta = a.run({}), tb = b.run({});
  ASSERT_FALSE(ta.message_log.empty());
  EXPECT_EQ(ta.message_log, tb.message_log);
}

TEST(LockstepTest, StampsFollowTheVirtualClock) {
  Rig rig;
  const Trace t = rig.run({});
  std::int64_t last_cmd = -1, last_pose = -1;
  for (const auto& frame : t.message_log) {
    const TopicMessage m = decode_frame(frame);
    if (m.topic == TopicId::motor_commands) {
      if (last_cmd >= 0) ASSERT_EQ(m.stamp_ns - last_cmd, 20'000'000);
      last_cmd = m.stamp_ns;
    } else if (m.topic == TopicId::pose) {
      if (last_pose >= 0) ASSERT_EQ(m.stamp_ns - last_pose, 10'000'000);
      last_pose = m.stamp_ns;
    }
  }
  EXPECT_EQ(last_pose, 15'000'000'000);
  EXPECT_EQ(last_cmd, 14'980'000'000);
}

TEST(LockstepTest, ControllerSeesStateOfTheSameTick) {
  // The first command is computed from the initial state, so starting at
  // rest on the ground gives hover speeds, not the safety command path.
  Rig rig;
  const Trace t = rig.run({});
  EXPECT_EQ(t.commands.front().path, TickPath::nominal);
  EXPECT_EQ(t.samples.front().command, t.commands.front().speeds);
}

TEST(LockstepTest, MutedPlantTriggersSafetyAndHoldsIt) {
  Rig rig(std::vector<ScheduledSetpoint>{{0.0, {1.0, 0, 0, 0}}});
  LockstepOptions o;
  o.mute_plant_at_s = 5.0;
  const Trace t = rig.run(o);
  const MotorSpeeds safety = rig.controller->config().safety_command;
  std::optional<std::int64_t> first_safety;
  for (const auto& c : t.commands) {
    if (c.t_ns < 5'000'000'000) {
      ASSERT_EQ(c.path, TickPath::nominal);
      continue;
    }
    if (!first_safety && c.path != TickPath::nominal) first_safety = c.t_ns;
    if (first_safety) {
      ASSERT_EQ(c.path, TickPath::stale);
      ASSERT_EQ(c.speeds, safety);
    }
  }
  ASSERT_TRUE(first_safety);
  EXPECT_LE(*first_safety, 5'120'000'000);
}

}  // namespace
}  // namespace qsim

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qsim/control/allocation.hpp"
#include "qsim/control/altitude.hpp"
#include "qsim/control/lqr.hpp"
#include "qsim/dynamics/types.hpp"

namespace qsim {

struct ScheduledSetpoint {
  double t = 0.0;  // mission time at which the setpoint becomes active, s
  Setpoint setpoint;
};

struct ControllerConfig {
  double rate_hz = 50.0;
  double staleness_budget_s = 0.1;
  AltitudeGains altitude;
  AttitudeGains attitude;
  std::vector<ScheduledSetpoint> schedule;  // sorted by t
  MotorSpeeds safety_command;
  ActuatorLimits limits;

  /// Throws a configuration fault on rate/staleness/gain violations.
  void validate() const;
};

/// Defaults for the given airframe: 50 Hz, 0.1 s staleness, LQR gains from
/// unit weights, altitude gains fitted to 18 % overshoot at 2.5 s, hover
/// safety command, 2x thrust/speed limits, empty schedule (hold zero).
ControllerConfig default_controller_config(const QuadParams& p);

/// Setpoint active at the given mission time (the last entry with t <= now).
Setpoint active_setpoint(const std::vector<ScheduledSetpoint>& schedule, std::int64_t mission_ns);

struct ImuSample {
  Quaternion orientation;
  Vec3 angular_velocity = Vec3::Zero();
  std::int64_t received_ns = 0;
};

struct PoseSample {
  Vec3 position = Vec3::Zero();
  Quaternion orientation;
  std::int64_t received_ns = 0;
};

struct VelocitySample {
  Vec3 linear = Vec3::Zero();
  std::int64_t received_ns = 0;
};

/// Newest message of every subscribed topic, as seen by one tick.
struct SensorSnapshot {
  std::optional<ImuSample> imu;
  std::optional<PoseSample> pose;
  std::optional<VelocitySample> velocity;
};

struct ControllerClock {
  std::int64_t now_ns = 0;      // receiver clock, same domain as received_ns
  std::int64_t mission_ns = 0;  // time since the run started, drives the schedule
};

enum class TickPath { nominal, missing, stale, tilt_guard, attitude_fault };
std::string_view to_string(TickPath path) noexcept;

struct TickOutput {
  MotorSpeeds speeds;
  TickPath path = TickPath::nominal;
  ControlVector demand;  // only meaningful on the nominal path
};

/// Moments U2..U4 for the current attitude error.
Vec3 attitude_moments(const EulerAngles& att, const Vec3& rates, const Setpoint& sp,
                      const AttitudeGains& gains);

/// One pass of the controller main loop.  Pure: the result depends only on
/// the arguments.
TickOutput control_loop_tick(const SensorSnapshot& snapshot, const ControllerClock& clock,
                             const ControllerConfig& cfg, const QuadParams& params,
                             const MotorAllocator& allocator);

}  // namespace qsim

#include "qsim/control/controller.hpp"

#include <algorithm>
#include <cmath>

#include "qsim/dynamics/plant.hpp"
#include "qsim/dynamics/rotation.hpp"
#include "qsim/fault.hpp"

namespace qsim {

namespace {

std::int64_t to_ns(double seconds) { return std::llround(seconds * 1e9); }

[[noreturn]] void config_fault(const std::string& what) {
  throw Fault(FaultKind::configuration, "controller config: " + what);
}

}  // namespace

std::string_view to_string(TickPath path) noexcept {
  switch (path) {
    case TickPath::nominal: return "nominal";
    case TickPath::missing: return "missing";
    case TickPath::stale: return "stale";
    case TickPath::tilt_guard: return "tilt_guard";
    case TickPath::attitude_fault: return "attitude_fault";
  }
  return "unknown";
}

void ControllerConfig::validate() const {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) config_fault("rate_hz must be positive");
  if (!(staleness_budget_s >= 1.0 / rate_hz - 1e-12)) {
    config_fault("staleness budget must cover at least one control period");
  }
  if (!(altitude.kp > 0.0 && altitude.kd > 0.0)) config_fault("altitude gains must be positive");
  for (const ChannelGains& g : {attitude.roll, attitude.pitch, attitude.yaw}) {
    if (!(g.k1 > 0.0 && g.k2 > 0.0)) config_fault("attitude gains must be positive");
  }
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const Setpoint& sp = schedule[i].setpoint;
    if (!(std::abs(sp.roll_des) < 0.5 && std::abs(sp.pitch_des) < 0.5)) {
      config_fault("setpoint roll/pitch must stay below 0.5 rad");
    }
    if (i > 0 && schedule[i].t < schedule[i - 1].t) config_fault("schedule must be sorted by time");
  }
  for (double w : safety_command.w) {
    if (!(w >= 0.0) || !std::isfinite(w)) config_fault("safety command speeds must be >= 0");
  }
  if (!(limits.thrust_max > 0.0 && limits.omega_max > 0.0)) {
    config_fault("actuator limits must be positive");
  }
}

ControllerConfig default_controller_config(const QuadParams& p) {
  ControllerConfig cfg;
  const LqrWeights unit{};
  cfg.attitude = {solve_channel_are(p.ixx, unit), solve_channel_are(p.iyy, unit),
                  solve_channel_are(p.izz, unit)};
  cfg.altitude = fit_altitude_gains(0.18, 2.5, p);
  cfg.safety_command = hover_speeds(p);
  cfg.limits = ActuatorLimits::scaled(p);
  return cfg;
}

Setpoint active_setpoint(const std::vector<ScheduledSetpoint>& schedule, std::int64_t mission_ns) {
  Setpoint current;
  for (const ScheduledSetpoint& s : schedule) {
    if (to_ns(s.t) > mission_ns) break;
    current = s.setpoint;
  }
  return current;
}

Vec3 attitude_moments(const EulerAngles& att, const Vec3& rates, const Setpoint& sp,
                      const AttitudeGains& gains) {
  return {gains.roll.k1 * (sp.roll_des - att.roll) - gains.roll.k2 * rates[0],
          gains.pitch.k1 * (sp.pitch_des - att.pitch) - gains.pitch.k2 * rates[1],
          gains.yaw.k1 * (sp.yaw_des - att.yaw) - gains.yaw.k2 * rates[2]};
}

TickOutput control_loop_tick(const SensorSnapshot& snapshot, const ControllerClock& clock,
                             const ControllerConfig& cfg, const QuadParams& params,
                             const MotorAllocator& allocator) {
  const TickOutput safety{cfg.safety_command, TickPath::missing, {}};
  if (!snapshot.imu || !snapshot.pose || !snapshot.velocity) return safety;

  const std::int64_t budget = to_ns(cfg.staleness_budget_s);
  for (std::int64_t received : {snapshot.imu->received_ns, snapshot.pose->received_ns,
                                snapshot.velocity->received_ns}) {
    if (clock.now_ns - received > budget) return {cfg.safety_command, TickPath::stale, {}};
  }

  EulerAngles att;
  try {
    att = quaternion_to_euler(snapshot.imu->orientation);
  } catch (const Fault&) {
    return {cfg.safety_command, TickPath::attitude_fault, {}};
  }

  const Setpoint sp = active_setpoint(cfg.schedule, clock.mission_ns);
  const Vec3 moments = attitude_moments(att, snapshot.imu->angular_velocity, sp, cfg.attitude);
  const std::optional<double> thrust =
      altitude_thrust(snapshot.pose->position.z(), snapshot.velocity->linear.z(), att, sp,
                      cfg.altitude, params, cfg.limits);
  if (!thrust) return {cfg.safety_command, TickPath::tilt_guard, {}};

  const ControlVector u{*thrust, moments[0], moments[1], moments[2]};
  return {allocator.allocate(u, cfg.limits.omega_max), TickPath::nominal, u};
}

}  // namespace qsim

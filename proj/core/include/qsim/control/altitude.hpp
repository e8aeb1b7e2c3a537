#pragma once

#include <limits>
#include <optional>

#include "qsim/dynamics/types.hpp"

namespace qsim {

struct AltitudeGains {
  double kp = 0.0;  // N/m
  double kd = 0.0;  // N s/m

  bool operator==(const AltitudeGains&) const = default;
};

struct Setpoint {
  double z_des = 0.0;
  double roll_des = 0.0;
  double pitch_des = 0.0;
  double yaw_des = 0.0;

  bool operator==(const Setpoint&) const = default;
};

/// Actuator saturation.  Both bounds are absolute values.
struct ActuatorLimits {
  double thrust_max = std::numeric_limits<double>::infinity();  // N
  double omega_max = std::numeric_limits<double>::infinity();   // rad/s

  /// thrust_factor * m g and omega_factor * hover speed.
  static ActuatorLimits scaled(const QuadParams& p, double thrust_factor = 2.0,
                               double omega_factor = 2.0);
};

/// cos(roll) cos(pitch) below this value trips the tilt guard.
inline constexpr double kTiltGuard = 0.2;

/// Back-derives PD gains from a desired second-order step response of the
/// linearised altitude loop m z'' = kp e - kd z'.
AltitudeGains fit_altitude_gains(double target_overshoot, double target_peak_time,
                                 const QuadParams& p);

/// Gravity feedforward plus PD feedback, divided by the tilt factor and clamped
/// to [0, limits.thrust_max].  Returns nullopt when the tilt guard trips.
std::optional<double> altitude_thrust(double z, double z_rate, const EulerAngles& att,
                                      const Setpoint& sp, const AltitudeGains& g,
                                      const QuadParams& p, const ActuatorLimits& limits);

}  // namespace qsim

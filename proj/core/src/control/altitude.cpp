#include "qsim/control/altitude.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsim/dynamics/plant.hpp"
#include "qsim/fault.hpp"

namespace qsim {

ActuatorLimits ActuatorLimits::scaled(const QuadParams& p, double thrust_factor,
                                      double omega_factor) {
  return {thrust_factor * p.weight(), omega_factor * hover_speed(p)};
}

AltitudeGains fit_altitude_gains(double target_overshoot, double target_peak_time,
                                 const QuadParams& p) {
  if (!(target_overshoot > 0.0 && target_overshoot < 1.0) || !(target_peak_time > 0.0)) {
    throw Fault(FaultKind::configuration,
                "altitude fit needs 0 < overshoot < 1 and peak time > 0");
  }
  constexpr double pi = std::numbers::pi;
  const double log_mp = std::log(target_overshoot);
  const double zeta = -log_mp / std::sqrt(pi * pi + log_mp * log_mp);
  const double omega_n = pi / (target_peak_time * std::sqrt(1.0 - zeta * zeta));
  return {p.mass * omega_n * omega_n, 2.0 * p.mass * zeta * omega_n};
}

std::optional<double> altitude_thrust(double z, double z_rate, const EulerAngles& att,
                                      const Setpoint& sp, const AltitudeGains& g,
                                      const QuadParams& p, const ActuatorLimits& limits) {
  const double tilt = std::cos(att.pitch) * std::cos(att.roll);
  if (!(tilt > kTiltGuard)) return std::nullopt;
  const double u1 = (p.weight() + g.kp * (sp.z_des - z) - g.kd * z_rate) / tilt;
  return std::clamp(u1, 0.0, limits.thrust_max);
}

}  // namespace qsim

#pragma once

#include <Eigen/Core>

#include "qsim/dynamics/types.hpp"

namespace qsim {

/// Maps squared rotor speeds to (U1, U2, U3, U4).
Eigen::Matrix4d mixing_matrix(const QuadParams& p);

ControlVector mix_forward(const MotorSpeeds& w, const QuadParams& p);

/// Earth-frame linear acceleration produced by thrust U1 along body z plus
/// gravity.
Vec3 translational_accel(const EulerAngles& att, double thrust, const QuadParams& p);

/// Body angular acceleration from (U2, U3, U4).  RotationalModel::full keeps
/// the (Iyy - Izz) q r style coupling terms.
Vec3 rotational_accel(const Vec3& rates, const Vec3& moments, const QuadParams& p,
                      RotationalModel model);

/// Time derivative of the packed 12-state.  Euler rates are taken equal to the
/// body rates (small-angle kinematics).
StateVector state_derivative(const VehicleState& s, const MotorSpeeds& w,
                             const QuadParams& p, RotationalModel model);

/// One classical RK4 step.  Motor speeds are held constant over the step.
VehicleState plant_step(const VehicleState& s, const MotorSpeeds& w, const QuadParams& p,
                        double dt, RotationalModel model = RotationalModel::full);

/// Equal rotor speed at which total thrust balances weight.
double hover_speed(const QuadParams& p);

inline MotorSpeeds hover_speeds(const QuadParams& p) {
  const double wh = hover_speed(p);
  return MotorSpeeds{{wh, wh, wh, wh}};
}

}  // namespace qsim

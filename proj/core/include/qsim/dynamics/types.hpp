#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace qsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using StateVector = Eigen::Matrix<double, 12, 1>;

/// Physical constants of the vehicle.  Defaults are the reference airframe.
struct QuadParams {
  double mass = 1.96;             // kg
  double gravity = 9.81;          // m/s^2
  double ixx = 0.0149;            // kg m^2
  double iyy = 0.0153;            // kg m^2
  double izz = 0.0532;            // kg m^2
  double arm_length = 0.59;       // m, rotor to centre of mass
  double thrust_coeff = 2.06e-7;  // N s^2 / rad^2
  double torque_coeff = 1.01e-10; // N m s^2 / rad^2

  double weight() const noexcept { return mass * gravity; }

  /// Throws a configuration fault unless every field is finite and positive.
  void validate() const;

  bool operator==(const QuadParams&) const = default;
};

/// Z-Y-X Euler angles, radians.
struct EulerAngles {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  bool operator==(const EulerAngles&) const = default;
};

/// Pitch magnitude at which the Euler representation is declared singular.
inline constexpr double kGimbalLockPitch = std::numbers::pi / 2.0 - 1e-6;

/// Rigid-body state.  Position and velocity live in the earth ENU frame,
/// body_rates are (p, q, r) about the body axes.
struct VehicleState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  EulerAngles attitude;
  Vec3 body_rates = Vec3::Zero();
  double t = 0.0;

  /// Packs (x, y, z, vx, vy, vz, roll, pitch, yaw, p, q, r).
  StateVector to_vector() const;
  static VehicleState from_vector(const StateVector& v, double t);

  bool all_finite() const;
};

struct MotorSpeeds {
  std::array<double, 4> w{};  // rad/s, rotors 1..4

  double& operator[](std::size_t i) { return w[i]; }
  double operator[](std::size_t i) const { return w[i]; }

  bool operator==(const MotorSpeeds&) const = default;
};

/// Total thrust and the three body moments.
struct ControlVector {
  double thrust = 0.0;        // U1, N
  double roll_moment = 0.0;   // U2, N m
  double pitch_moment = 0.0;  // U3, N m
  double yaw_moment = 0.0;    // U4, N m

  Eigen::Vector4d as_vector() const {
    return {thrust, roll_moment, pitch_moment, yaw_moment};
  }
  static ControlVector from_vector(const Eigen::Vector4d& u) {
    return {u[0], u[1], u[2], u[3]};
  }
};

/// Unit quaternion, scalar first.
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const noexcept { return std::sqrt(w * w + x * x + y * y + z * z); }

  bool operator==(const Quaternion&) const = default;
};

/// Which rotational equation the plant integrates: with the gyroscopic
/// cross-coupling terms, or the decoupled linear form the controller assumes.
enum class RotationalModel { full, simplified };

}  // namespace qsim

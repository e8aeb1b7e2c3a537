#include "qsim/dynamics/rotation.hpp"

#include <cmath>
#include <sstream>

#include "qsim/fault.hpp"

namespace qsim {

namespace {

void check_pitch(double pitch) {
  if (!(std::abs(pitch) < kGimbalLockPitch)) {
    std::ostringstream os;
    os << "gimbal lock: |pitch| = " << std::abs(pitch) << " rad";
    throw Fault(FaultKind::gimbal_lock, os.str());
  }
}

}  // namespace

Mat3 rotation_enu_to_body(const EulerAngles& att) {
  check_pitch(att.pitch);
  const double cph = std::cos(att.roll), sph = std::sin(att.roll);
  const double cth = std::cos(att.pitch), sth = std::sin(att.pitch);
  const double cps = std::cos(att.yaw), sps = std::sin(att.yaw);

  Mat3 c;
  c << cth * cps, cth * sps, -sth,
       sph * sth * cps - cph * sps, sph * sth * sps + cph * cps, sph * cth,
       cph * sth * cps + sph * sps, cph * sth * sps - sph * cps, cph * cth;
  return c;
}

Quaternion normalized(const Quaternion& q) {
  const double n = q.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Fault(FaultKind::non_finite_state, "cannot normalise a zero or non-finite quaternion");
  }
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

Quaternion euler_to_quaternion(const EulerAngles& att) {
  const double cr = std::cos(att.roll / 2), sr = std::sin(att.roll / 2);
  const double cp = std::cos(att.pitch / 2), sp = std::sin(att.pitch / 2);
  const double cy = std::cos(att.yaw / 2), sy = std::sin(att.yaw / 2);

  Quaternion q{cr * cp * cy + sr * sp * sy,
               sr * cp * cy - cr * sp * sy,
               cr * sp * cy + sr * cp * sy,
               cr * cp * sy - sr * sp * cy};
  if (q.w < 0.0) q = {-q.w, -q.x, -q.y, -q.z};
  return normalized(q);
}

EulerAngles quaternion_to_euler(const Quaternion& in) {
  const Quaternion q = normalized(in);
  const double sin_pitch = 2.0 * (q.w * q.y - q.z * q.x);
  if (std::abs(sin_pitch) > 1.0 - 1e-9) {
    std::ostringstream os;
    os << "gimbal lock: quaternion has sin(pitch) = " << sin_pitch;
    throw Fault(FaultKind::gimbal_lock, os.str());
  }
  EulerAngles att;
  att.roll = std::atan2(2.0 * (q.w * q.x + q.y * q.z), 1.0 - 2.0 * (q.x * q.x + q.y * q.y));
  att.pitch = std::asin(sin_pitch);
  att.yaw = std::atan2(2.0 * (q.w * q.z + q.x * q.y), 1.0 - 2.0 * (q.y * q.y + q.z * q.z));
  return att;
}

Mat3 quaternion_to_matrix(const Quaternion& in) {
  const Quaternion q = normalized(in);
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  Mat3 r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

}  // namespace qsim

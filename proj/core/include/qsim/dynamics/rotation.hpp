#pragma once

#include "qsim/dynamics/types.hpp"

namespace qsim {

/// Direction cosine matrix taking earth-frame vectors into the body frame,
/// Z-Y-X sequence.  Throws FaultKind::gimbal_lock when |pitch| is at or past
/// kGimbalLockPitch.
Mat3 rotation_enu_to_body(const EulerAngles& att);

/// Z-Y-X composition, canonicalised so that w >= 0.  The rotation matrix of
/// the result equals rotation_enu_to_body(att) transposed (body to earth).
Quaternion euler_to_quaternion(const EulerAngles& att);

/// Inverse of euler_to_quaternion.  The input is normalised first; a fault is
/// raised when |sin(pitch)| > 1 - 1e-9.
EulerAngles quaternion_to_euler(const Quaternion& q);

/// Body-to-earth rotation matrix of a unit quaternion.
Mat3 quaternion_to_matrix(const Quaternion& q);

Quaternion normalized(const Quaternion& q);

}  // namespace qsim

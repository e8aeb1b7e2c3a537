#pragma once

#include <Eigen/Core>

#include "qsim/control/altitude.hpp"
#include "qsim/dynamics/types.hpp"

namespace qsim {

/// Inverts the mixing matrix.  Construction fails with a configuration fault
/// if the matrix is singular for the given parameters.
class MotorAllocator {
 public:
  explicit MotorAllocator(const QuadParams& p);

  /// Squared speeds M^-1 U, before any clamping.
  Eigen::Vector4d squared_speeds(const ControlVector& u) const;

  /// Negative squared speeds clamp to zero, then speeds clamp to omega_max.
  MotorSpeeds allocate(const ControlVector& u,
                       double omega_max = std::numeric_limits<double>::infinity()) const;

 private:
  Eigen::Matrix4d inverse_;
};

MotorSpeeds allocate_motors(const ControlVector& u, const QuadParams& p,
                            double omega_max = std::numeric_limits<double>::infinity());

}  // namespace qsim

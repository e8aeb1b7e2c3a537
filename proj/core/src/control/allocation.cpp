#include "qsim/control/allocation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "qsim/dynamics/plant.hpp"
#include "qsim/fault.hpp"

namespace qsim {

MotorAllocator::MotorAllocator(const QuadParams& p) {
  const Eigen::FullPivLU<Eigen::Matrix4d> lu(mixing_matrix(p));
  if (!lu.isInvertible()) {
    throw Fault(FaultKind::configuration, "mixing matrix is singular for these parameters");
  }
  inverse_ = lu.inverse();
}

Eigen::Vector4d MotorAllocator::squared_speeds(const ControlVector& u) const {
  return inverse_ * u.as_vector();
}

MotorSpeeds MotorAllocator::allocate(const ControlVector& u, double omega_max) const {
  const Eigen::Vector4d sq = squared_speeds(u);
  MotorSpeeds out;
  for (int i = 0; i < 4; ++i) {
    out[i] = std::min(std::sqrt(std::max(0.0, sq[i])), omega_max);
  }
  return out;
}

MotorSpeeds allocate_motors(const ControlVector& u, const QuadParams& p, double omega_max) {
  return MotorAllocator(p).allocate(u, omega_max);
}

}  // namespace qsim

#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

namespace qsim {

/// Quadratic cost weights for one attitude channel: Q = diag(q1, q2), R = r.
struct LqrWeights {
  double q1 = 1.0;  // tracking error
  double q2 = 1.0;  // angular rate
  double r = 1.0;   // moment

  void validate() const;
};

/// Feedback gains applied as U = k1 * (setpoint - angle) - k2 * rate.
struct ChannelGains {
  double k1 = 0.0;
  double k2 = 0.0;

  bool operator==(const ChannelGains&) const = default;
};

struct AttitudeGains {
  ChannelGains roll;
  ChannelGains pitch;
  ChannelGains yaw;
};

/// Error-state model of a single attitude channel with state [e, rate],
/// e = setpoint - angle:  de/dt = -rate,  d(rate)/dt = U / inertia.
struct ChannelModel {
  Eigen::Matrix2d a;
  Eigen::Vector2d b;
};
ChannelModel channel_model(double inertia);

struct ChannelRiccatiSolution {
  Eigen::Matrix2d p;    // stabilising ARE solution in [e, rate] coordinates
  ChannelGains gains;
  int iterations = 0;
};

/// Solves the continuous ARE of the channel model by Newton-Kleinman
/// iteration.  Throws FaultKind::solver if it fails to converge or the result
/// does not satisfy the equation.
ChannelRiccatiSolution solve_channel_riccati(double inertia, const LqrWeights& w);

inline ChannelGains solve_channel_are(double inertia, const LqrWeights& w) {
  return solve_channel_riccati(inertia, w).gains;
}

/// Analytic gains of the double-integrator channel:
///   k1 = sqrt(q1 / r),  k2 = sqrt(q2 / r + 2 I sqrt(q1 / r)).
ChannelGains closed_form_channel_gains(double inertia, const LqrWeights& w);

/// ARE solution implied by the analytic gains.
Eigen::Matrix2d closed_form_channel_riccati(double inertia, const LqrWeights& w);

/// Frobenius norm of A'P + PA - P B R^-1 B' P + Q for the channel model.
double riccati_residual(double inertia, const LqrWeights& w, const Eigen::Matrix2d& p);

/// Roots of I s^2 + k2 s + k1.
std::array<std::complex<double>, 2> closed_loop_poles(double inertia, const ChannelGains& g);

}  // namespace qsim

#include "qsim/dynamics/plant.hpp"

#include <cmath>
#include <sstream>

#include "qsim/dynamics/rotation.hpp"
#include "qsim/fault.hpp"

namespace qsim {

void QuadParams::validate() const {
  const double fields[] = {mass, gravity, ixx, iyy, izz, arm_length, thrust_coeff, torque_coeff};
  const char* names[] = {"mass", "gravity", "ixx", "iyy", "izz",
                         "arm_length", "thrust_coeff", "torque_coeff"};
  for (std::size_t i = 0; i < std::size(fields); ++i) {
    if (!(std::isfinite(fields[i]) && fields[i] > 0.0)) {
      throw Fault(FaultKind::configuration,
                  std::string("quad parameter '") + names[i] + "' must be finite and positive");
    }
  }
}

StateVector VehicleState::to_vector() const {
  StateVector v;
  v << position, velocity, attitude.roll, attitude.pitch, attitude.yaw, body_rates;
  return v;
}

VehicleState VehicleState::from_vector(const StateVector& v, double t) {
  VehicleState s;
  s.position = v.segment<3>(0);
  s.velocity = v.segment<3>(3);
  s.attitude = {v[6], v[7], v[8]};
  s.body_rates = v.segment<3>(9);
  s.t = t;
  return s;
}

bool VehicleState::all_finite() const { return to_vector().allFinite() && std::isfinite(t); }

Eigen::Matrix4d mixing_matrix(const QuadParams& p) {
  const double kf = p.thrust_coeff, km = p.torque_coeff, lkf = p.arm_length * p.thrust_coeff;
  Eigen::Matrix4d m;
  m << kf, kf, kf, kf,
       0.0, -lkf, 0.0, lkf,
       -lkf, 0.0, lkf, 0.0,
       km, -km, km, -km;
  return m;
}

ControlVector mix_forward(const MotorSpeeds& w, const QuadParams& p) {
  Eigen::Vector4d sq;
  for (int i = 0; i < 4; ++i) sq[i] = w[i] * w[i];
  return ControlVector::from_vector(mixing_matrix(p) * sq);
}

Vec3 translational_accel(const EulerAngles& att, double thrust, const QuadParams& p) {
  const double cph = std::cos(att.roll), sph = std::sin(att.roll);
  const double cth = std::cos(att.pitch), sth = std::sin(att.pitch);
  const double cps = std::cos(att.yaw), sps = std::sin(att.yaw);
  const double a = thrust / p.mass;
  return {a * (cps * sth * cph + sps * sph),
          a * (sps * sth * cph - cps * sph),
          a * (cth * cph) - p.gravity};
}

Vec3 rotational_accel(const Vec3& rates, const Vec3& moments, const QuadParams& p,
                      RotationalModel model) {
  Vec3 coupling = Vec3::Zero();
  if (model == RotationalModel::full) {
    const double pr = rates[0], qr = rates[1], rr = rates[2];
    coupling = {(p.iyy - p.izz) * qr * rr,
                (p.izz - p.ixx) * pr * rr,
                (p.ixx - p.iyy) * pr * qr};
  }
  return {(moments[0] + coupling[0]) / p.ixx,
          (moments[1] + coupling[1]) / p.iyy,
          (moments[2] + coupling[2]) / p.izz};
}

StateVector state_derivative(const VehicleState& s, const MotorSpeeds& w, const QuadParams& p,
                             RotationalModel model) {
  // A NaN pitch is reported by the caller as a non-finite state instead.
  if (std::isfinite(s.attitude.pitch) && !(std::abs(s.attitude.pitch) < kGimbalLockPitch)) {
    std::ostringstream os;
    os << "gimbal lock at t=" << s.t << ": pitch = " << s.attitude.pitch;
    throw Fault(FaultKind::gimbal_lock, os.str());
  }
  const ControlVector u = mix_forward(w, p);
  StateVector d;
  d.segment<3>(0) = s.velocity;
  d.segment<3>(3) = translational_accel(s.attitude, u.thrust, p);
  d.segment<3>(6) = s.body_rates;
  d.segment<3>(9) = rotational_accel(s.body_rates, {u.roll_moment, u.pitch_moment, u.yaw_moment},
                                     p, model);
  return d;
}

namespace {

[[noreturn]] void non_finite_fault(const VehicleState& s, double dt) {
  std::ostringstream os;
  os.precision(17);
  os << "non-finite state after step of dt=" << dt << " from t=" << s.t << "; state = ["
     << s.to_vector().transpose() << "]";
  throw Fault(FaultKind::non_finite_state, os.str());
}

}  // namespace

VehicleState plant_step(const VehicleState& s, const MotorSpeeds& w, const QuadParams& p, double dt,
                        RotationalModel model) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Fault(FaultKind::configuration, "plant_step requires a finite dt > 0");
  }
  const StateVector x = s.to_vector();
  auto f = [&](const StateVector& xi, double ti) {
    return state_derivative(VehicleState::from_vector(xi, ti), w, p, model);
  };
  const StateVector k1 = f(x, s.t);
  const StateVector k2 = f(x + 0.5 * dt * k1, s.t + 0.5 * dt);
  const StateVector k3 = f(x + 0.5 * dt * k2, s.t + 0.5 * dt);
  const StateVector k4 = f(x + dt * k3, s.t + dt);
  const StateVector next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  VehicleState out = VehicleState::from_vector(next, s.t + dt);
  if (!out.all_finite()) non_finite_fault(s, dt);
  if (!(std::abs(out.attitude.pitch) < kGimbalLockPitch)) {
    std::ostringstream os;
    os << "gimbal lock at t=" << out.t << ": pitch = " << out.attitude.pitch;
    throw Fault(FaultKind::gimbal_lock, os.str());
  }
  return out;
}

double hover_speed(const QuadParams& p) {
  return std::sqrt(p.weight() / (4.0 * p.thrust_coeff));
}

}  // namespace qsim

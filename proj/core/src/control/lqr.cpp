#include "qsim/control/lqr.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "qsim/fault.hpp"

namespace qsim {

void LqrWeights::validate() const {
  if (!(q1 > 0.0 && q2 >= 0.0 && r > 0.0) || !std::isfinite(q1) || !std::isfinite(q2) ||
      !std::isfinite(r)) {
    throw Fault(FaultKind::configuration, "LQR weights need q1 > 0, q2 >= 0, r > 0");
  }
}

ChannelModel channel_model(double inertia) {
  ChannelModel m;
  m.a << 0.0, -1.0,
         0.0, 0.0;
  m.b << 0.0, 1.0 / inertia;
  return m;
}

namespace {

void check_inertia(double inertia) {
  if (!(inertia > 0.0) || !std::isfinite(inertia)) {
    throw Fault(FaultKind::configuration, "channel inertia must be finite and positive");
  }
}

// Solves Acl' P + P Acl + M = 0 for symmetric P through the Kronecker form.
Eigen::Matrix2d solve_lyapunov(const Eigen::Matrix2d& acl, const Eigen::Matrix2d& m) {
  const Eigen::Matrix2d at = acl.transpose();
  const Eigen::Matrix2d eye = Eigen::Matrix2d::Identity();
  Eigen::Matrix4d op;
  // vec(At P) = (I kron At) vec(P); vec(P A) = (A' kron I) vec(P)
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          op(2 * i + k, 2 * j + l) = eye(i, j) * at(k, l) + acl(j, i) * eye(k, l);
  const Eigen::Vector4d rhs = -Eigen::Map<const Eigen::Vector4d>(m.data());
  const Eigen::FullPivLU<Eigen::Matrix4d> lu(op);
  if (!lu.isInvertible()) {
    throw Fault(FaultKind::solver, "Lyapunov operator is singular");
  }
  const Eigen::Vector4d x = lu.solve(rhs);
  Eigen::Matrix2d p = Eigen::Map<const Eigen::Matrix2d>(x.data());
  return 0.5 * (p + p.transpose());
}

}  // namespace

ChannelRiccatiSolution solve_channel_riccati(double inertia, const LqrWeights& w) {
  check_inertia(inertia);
  w.validate();

  const ChannelModel model = channel_model(inertia);
  const Eigen::Matrix2d q = Eigen::Vector2d(w.q1, w.q2).asDiagonal();

  // Stabilising start: closed loop s^2 + 2 s + 1.
  Eigen::RowVector2d k(-inertia, 2.0 * inertia);
  Eigen::Matrix2d p = Eigen::Matrix2d::Zero();

  constexpr int kMaxIterations = 60;
  int it = 0;
  bool converged = false;
  for (; it < kMaxIterations; ++it) {
    const Eigen::Matrix2d acl = model.a - model.b * k;
    const Eigen::Matrix2d next = solve_lyapunov(acl, q + k.transpose() * w.r * k);
    const double step = (next - p).norm();
    p = next;
    k = (model.b.transpose() * p) / w.r;
    if (step <= 1e-14 * std::max(1.0, p.norm())) {
      converged = true;
      ++it;
      break;
    }
  }

  const double residual = riccati_residual(inertia, w, p);
  if (!converged || !(residual < 1e-9 * std::max(1.0, p.norm()))) {
    std::ostringstream os;
    os << "Riccati iteration did not converge (iterations=" << it << ", residual=" << residual
       << ")";
    throw Fault(FaultKind::solver, os.str());
  }

  ChannelRiccatiSolution out;
  out.p = p;
  out.gains = {-k[0], k[1]};
  out.iterations = it;
  return out;
}

ChannelGains closed_form_channel_gains(double inertia, const LqrWeights& w) {
  check_inertia(inertia);
  w.validate();
  const double k1 = std::sqrt(w.q1 / w.r);
  return {k1, std::sqrt(w.q2 / w.r + 2.0 * inertia * k1)};
}

Eigen::Matrix2d closed_form_channel_riccati(double inertia, const LqrWeights& w) {
  const ChannelGains g = closed_form_channel_gains(inertia, w);
  Eigen::Matrix2d p;
  p << w.r * g.k1 * g.k2, -w.r * g.k1 * inertia,
       -w.r * g.k1 * inertia, w.r * g.k2 * inertia;
  return p;
}

double riccati_residual(double inertia, const LqrWeights& w, const Eigen::Matrix2d& p) {
  const ChannelModel model = channel_model(inertia);
  const Eigen::Matrix2d q = Eigen::Vector2d(w.q1, w.q2).asDiagonal();
  const Eigen::Matrix2d res = model.a.transpose() * p + p * model.a -
                              p * model.b * (1.0 / w.r) * model.b.transpose() * p + q;
  return res.norm();
}

std::array<std::complex<double>, 2> closed_loop_poles(double inertia, const ChannelGains& g) {
  const std::complex<double> disc = std::sqrt(std::complex<double>(g.k2 * g.k2 - 4.0 * inertia * g.k1));
  return {(-g.k2 + disc) / (2.0 * inertia), (-g.k2 - disc) / (2.0 * inertia)};
}

}  // namespace qsim

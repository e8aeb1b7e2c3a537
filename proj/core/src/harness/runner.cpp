#include "qsim/harness/runner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsim/harness/csv.hpp"
#include "qsim/fault.hpp"
#include "qsim/middleware/lockstep.hpp"
#include "qsim/middleware/nodes.hpp"
#include "qsim/middleware/udp.hpp"

namespace qsim {

Trace run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const ControllerConfig controller_cfg = make_controller_config(cfg);

  Trace trace;
  if (cfg.transport == TransportKind::lockstep) {
    Bus bus;
    bus.register_all_topics();
    PlantNode plant(bus, cfg.quad, cfg.rotational_model);
    ControllerNode controller(bus, cfg.quad, controller_cfg);
    LockstepOptions opts;
    opts.plant_rate_hz = cfg.plant_rate_hz;
    opts.controller_rate_hz = cfg.controller_rate_hz;
    opts.duration_s = cfg.duration_s;
    opts.mute_plant_at_s = cfg.mute_plant_at_s;
    trace = lockstep_run(plant, controller, bus, opts);
  } else {
    UdpRunOptions opts;
    opts.plant_rate_hz = cfg.plant_rate_hz;
    opts.controller_rate_hz = cfg.controller_rate_hz;
    opts.duration_s = cfg.duration_s;
    opts.endpoints = cfg.udp;
    opts.plant_stop_at_s = cfg.mute_plant_at_s;
    trace = udp_run(cfg.quad, cfg.rotational_model, controller_cfg, opts);
  }

  if (!cfg.output_csv.empty() && !trace.samples.empty()) emit_csv(trace, cfg.output_csv);
  return trace;
}

SignalStep extract_step(const Trace& trace, const std::vector<ScheduledSetpoint>& schedule,
                        std::string_view signal) {
  double Setpoint::*field = nullptr;
  if (signal == "z") field = &Setpoint::z_des;
  else if (signal == "phi") field = &Setpoint::roll_des;
  else if (signal == "theta") field = &Setpoint::pitch_des;
  else if (signal == "psi") field = &Setpoint::yaw_des;
  else throw Fault(FaultKind::configuration, "metrics signal must be z, phi, theta or psi");

  const std::size_t column = csv_column(signal);
  const double step_time = schedule.empty() ? 0.0 : schedule.back().t;

  SignalStep out;
  out.setpoint = schedule.empty() ? 0.0 : schedule.back().setpoint.*field;
  for (const TraceSample& s : trace.samples) {
    if (s.state.t < step_time - 1e-9) continue;
    out.t.push_back(s.state.t);
    out.y.push_back(to_csv_row(s)[column]);
  }
  if (out.y.empty()) throw Fault(FaultKind::configuration, "trace ends before the step");
  out.initial = out.y.front();
  return out;
}

namespace {

bool speeds_match(const MotorSpeeds& a, const MotorSpeeds& b, double rel_tol, double& worst) {
  bool ok = true;
  for (std::size_t i = 0; i < 4; ++i) {
    const double scale = std::max(std::abs(a[i]), std::abs(b[i]));
    const double rel = scale == 0.0 ? 0.0 : std::abs(a[i] - b[i]) / scale;
    worst = std::max(worst, rel);
    ok = ok && rel <= rel_tol;
  }
  return ok;
}

}  // namespace

StreamComparison compare_command_streams(std::span<const CommandRecord> reference,
                                         std::span<const CommandRecord> candidate,
                                         std::int64_t slack_ns, double rel_tol) {
  StreamComparison out;
  std::ostringstream detail;
  for (const CommandRecord& c : candidate) {
    ++out.compared;
    auto it = std::lower_bound(reference.begin(), reference.end(), c.t_ns - slack_ns,
                               [](const CommandRecord& r, std::int64_t t) { return r.t_ns < t; });
    bool matched = false;
    double best = std::numeric_limits<double>::infinity();
    for (; it != reference.end() && it->t_ns <= c.t_ns + slack_ns; ++it) {
      double worst = 0.0;
      if (speeds_match(it->speeds, c.speeds, rel_tol, worst)) matched = true;
      best = std::min(best, worst);
    }
    if (std::isfinite(best)) out.max_relative_error = std::max(out.max_relative_error, best);
    if (!matched) {
      if (out.mismatches == 0) detail << "first mismatch at t=" << c.t_ns * 1e-9 << " s";
      ++out.mismatches;
    }
  }
  out.equivalent = out.compared > 0 && out.mismatches == 0;
  out.detail = detail.str();
  return out;
}

}  // namespace qsim

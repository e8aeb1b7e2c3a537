// qsim: command line front end for the quadrotor co-simulation.
//
//   qsim run <scenario> [--out <csv>] [--transport lockstep|udp] [--metrics <signal>]
//   qsim gains --channel roll|pitch|yaw|altitude [--scenario <file>]
//   qsim codec-selftest

#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qsim/control/altitude.hpp"
#include "qsim/control/lqr.hpp"
#include "qsim/harness/metrics.hpp"
#include "qsim/harness/runner.hpp"
#include "qsim/harness/scenario.hpp"
#include "qsim/middleware/codec.hpp"

namespace {

void print_kv(const std::string& key, const std::string& value) {
  std::printf("%-20s: %s\n", key.c_str(), value.c_str());
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "n/a"; }

int cmd_run(const std::string& scenario_path, const std::string& out, const std::string& transport,
            const std::string& signal) {
  qsim::ScenarioConfig cfg = qsim::load_scenario(scenario_path);
  if (!out.empty()) cfg.output_csv = out;
  if (transport == "udp") cfg.transport = qsim::TransportKind::udp;
  if (transport == "lockstep") cfg.transport = qsim::TransportKind::lockstep;

  const qsim::Trace trace = qsim::run_scenario(cfg);
  print_kv("plant_steps", std::to_string(trace.plant_steps));
  print_kv("controller_ticks", std::to_string(trace.controller_ticks));
  if (!cfg.output_csv.empty()) print_kv("csv", cfg.output_csv);

  if (!signal.empty() && !trace.samples.empty()) {
    const qsim::SignalStep step = qsim::extract_step(trace, cfg.schedule, signal);
    const qsim::StepMetrics m = qsim::step_metrics(step.t, step.y, step.setpoint, step.initial);
    print_kv("signal", signal);
    print_kv("setpoint", num(step.setpoint));
    print_kv("peak_value", num(m.peak_value));
    print_kv("peak_time_s", num(m.peak_time_s));
    print_kv("overshoot_pct", num(m.overshoot_pct));
    print_kv("settling_time_s", opt_num(m.settling_time_s));
    print_kv("rise_time_s", opt_num(m.rise_time_s));
    print_kv("rise95_time_s", opt_num(m.rise95_time_s));
    print_kv("steady_state_error", num(m.steady_state_error));
  }

  if (trace.fault) {
    std::fprintf(stderr, "fault (%s) at t=%.6g s: %s\n",
                 std::string(qsim::to_string(trace.fault->kind)).c_str(), trace.fault->t,
                 trace.fault->message.c_str());
    return 2;
  }
  return 0;
}

int cmd_gains(const std::string& channel, const std::string& scenario_path) {
  const qsim::ScenarioConfig cfg =
      scenario_path.empty() ? qsim::ScenarioConfig{} : qsim::load_scenario(scenario_path);
  const qsim::ControllerConfig cc = qsim::make_controller_config(cfg);

  if (channel == "altitude") {
    print_kv("channel", channel);
    print_kv("kp", num(cc.altitude.kp));
    print_kv("kd", num(cc.altitude.kd));
    return 0;
  }
  double inertia = cfg.quad.ixx;
  qsim::ChannelGains g = cc.attitude.roll;
  if (channel == "pitch") {
    inertia = cfg.quad.iyy;
    g = cc.attitude.pitch;
  } else if (channel == "yaw") {
    inertia = cfg.quad.izz;
    g = cc.attitude.yaw;
  }
  const auto poles = qsim::closed_loop_poles(inertia, g);
  print_kv("channel", channel);
  print_kv("inertia", num(inertia));
  print_kv("k1", num(g.k1));
  print_kv("k2", num(g.k2));
  print_kv("pole_1", num(poles[0].real()) + (poles[0].imag() != 0 ? "+" + num(poles[0].imag()) + "i" : ""));
  print_kv("pole_2", num(poles[1].real()) + (poles[1].imag() != 0 ? num(poles[1].imag()) + "i" : ""));
  return 0;
}

qsim::TopicMessage random_message(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> topic(1, 4);
  std::uniform_real_distribution<double> value(-1e4, 1e4);
  qsim::TopicMessage m;
  m.topic = static_cast<qsim::TopicId>(topic(rng));
  m.seq = rng();
  m.stamp_ns = static_cast<std::int64_t>(rng());
  auto fill = [&](auto& arr) {
    for (double& v : arr) v = value(rng);
  };
  switch (m.topic) {
    case qsim::TopicId::motor_commands: { qsim::MotorCommandPayload p; fill(p.speeds); m.payload = p; break; }
    case qsim::TopicId::pose: { qsim::PosePayload p; fill(p.position); fill(p.orientation); m.payload = p; break; }
    case qsim::TopicId::velocity: { qsim::TwistPayload p; fill(p.linear); fill(p.angular); m.payload = p; break; }
    case qsim::TopicId::imu: { qsim::ImuPayload p; fill(p.orientation); fill(p.angular_velocity); m.payload = p; break; }
  }
  return m;
}

int cmd_codec_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::printf("%-4s %s\n", ok ? "ok" : "FAIL", what.c_str());
    if (!ok) ++failures;
  };

  // Zero motor command: magic, version 1, topic 1, zero seq/stamp, length 32.
  const qsim::TopicMessage zero{qsim::TopicId::motor_commands, 0, 0, qsim::MotorCommandPayload{}};
  std::vector<std::uint8_t> expected = {'Q', 'S', 'I', 'M', 1, 1};
  expected.insert(expected.end(), 16, 0);
  expected.push_back(32);
  expected.push_back(0);
  expected.insert(expected.end(), 32, 0);
  check(qsim::encode_frame(zero) == expected, "zero motor command vector");

  for (qsim::TopicId t : qsim::kAllTopics) {
    std::printf("     %-14s payload %zu bytes\n", std::string(qsim::topic_name(t)).c_str(),
                qsim::payload_size(t));
  }
  check(qsim::payload_size(qsim::TopicId::motor_commands) == 32 &&
            qsim::payload_size(qsim::TopicId::pose) == 56 &&
            qsim::payload_size(qsim::TopicId::velocity) == 48 &&
            qsim::payload_size(qsim::TopicId::imu) == 56,
        "payload sizes 32/56/48/56");

  std::mt19937_64 rng(20240501);
  int round_trip_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const qsim::TopicMessage m = random_message(rng);
    const auto frame = qsim::encode_frame(m);
    if (qsim::decode_frame(frame) != m || qsim::encode_frame(m) != frame) ++round_trip_failures;
  }
  check(round_trip_failures == 0, "1000 random round trips");

  auto bad = qsim::encode_frame(zero);
  bad[0] = 'X';
  try {
    qsim::decode_frame(bad);
    check(false, "corrupted magic rejected");
  } catch (const qsim::DecodeError& e) {
    check(e.code() == qsim::DecodeErrc::bad_magic, "corrupted magic rejected");
  }
  auto cut = qsim::encode_frame(zero);
  cut.resize(cut.size() - 5);
  try {
    qsim::decode_frame(cut);
    check(false, "truncated frame rejected");
  } catch (const qsim::DecodeError& e) {
    check(e.code() == qsim::DecodeErrc::truncated, "truncated frame rejected");
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrotor software-in-the-loop co-simulation"};
  app.require_subcommand(1);

  std::string scenario, out, transport, signal;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "CSV output path (overrides output.csv)");
  run->add_option("--transport", transport, "lockstep or udp")
      ->check(CLI::IsMember({"lockstep", "udp"}));
  run->add_option("--metrics", signal, "Print step metrics for z, phi, theta or psi")
      ->check(CLI::IsMember({"z", "phi", "theta", "psi"}));

  std::string channel, gains_scenario;
  auto* gains = app.add_subcommand("gains", "Print synthesised controller gains");
  gains->add_option("--channel", channel, "roll, pitch, yaw or altitude")
      ->required()
      ->check(CLI::IsMember({"roll", "pitch", "yaw", "altitude"}));
  gains->add_option("--scenario", gains_scenario, "Take parameters and weights from a scenario")
      ->check(CLI::ExistingFile);

  auto* selftest = app.add_subcommand("codec-selftest", "Run wire-format round-trip vectors");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(scenario, out, transport, signal);
    if (*gains) return cmd_gains(channel, gains_scenario);
    if (*selftest) return cmd_codec_selftest();
  } catch (const qsim::Fault& f) {
    std::fprintf(stderr, "error (%s): %s\n", std::string(qsim::to_string(f.kind())).c_str(),
                 f.what());
    return 2;
  }
  return 1;
}

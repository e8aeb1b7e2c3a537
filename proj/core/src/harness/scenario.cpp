#include "qsim/harness/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "qsim/dynamics/plant.hpp"
#include "qsim/middleware/lockstep.hpp"

namespace qsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view value, std::size_t line, std::string_view key) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    throw ScenarioError(line, "key '" + std::string(key) + "' expects a number, got '" +
                                  std::string(value) + "'");
  }
  return out;
}

template <typename Int>
Int parse_int(std::string_view value, std::size_t line, std::string_view key) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ScenarioError(line, "key '" + std::string(key) + "' expects an integer, got '" +
                                  std::string(value) + "'");
  }
  return out;
}

std::vector<std::string_view> split_dots(std::string_view key) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    parts.push_back(key.substr(start, dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

struct PartialGains {
  std::optional<double> k1, k2;
  std::size_t line = 0;
};

struct PartialSetpoint {
  ScheduledSetpoint entry;
  std::size_t line = 0;
};

class Parser {
 public:
  ScenarioConfig run(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      line = trim(line);
      if (!line.empty()) handle(line, line_no);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    return finish();
  }

 private:
  void handle(std::string_view line, std::size_t n) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ScenarioError(n, "expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ScenarioError(n, "missing key before '='");
    if (!lines_.emplace(key, n).second) {
      throw ScenarioError(n, "duplicate key '" + key + "' (first set on line " +
                                 std::to_string(lines_[key]) + ")");
    }
    assign(key, value, n);
  }

  double num(std::string_view v, std::size_t n, std::string_view key) {
    return parse_double(v, n, key);
  }

  void assign(const std::string& key, std::string_view v, std::size_t n) {
    ScenarioConfig& c = cfg_;
    if (key == "duration_s") { c.duration_s = num(v, n, key); return; }
    if (key == "plant_rate_hz") { c.plant_rate_hz = num(v, n, key); return; }
    if (key == "controller_rate_hz") { c.controller_rate_hz = num(v, n, key); return; }
    if (key == "transport") {
      if (v == "lockstep") c.transport = TransportKind::lockstep;
      else if (v == "udp") c.transport = TransportKind::udp;
      else throw ScenarioError(n, "transport must be 'lockstep' or 'udp'");
      return;
    }
    if (key == "udp.host") { c.udp.host = std::string(v); return; }
    if (key == "udp.plant_port") { c.udp.plant_port = parse_int<std::uint16_t>(v, n, key); return; }
    if (key == "udp.controller_port") {
      c.udp.controller_port = parse_int<std::uint16_t>(v, n, key);
      return;
    }
    if (key == "model.rotational") {
      if (v == "full") c.rotational_model = RotationalModel::full;
      else if (v == "simplified") c.rotational_model = RotationalModel::simplified;
      else throw ScenarioError(n, "model.rotational must be 'full' or 'simplified'");
      return;
    }
    if (key == "controller.staleness_s") { c.staleness_budget_s = num(v, n, key); return; }
    if (key == "controller.safety") {
      if (v == "hover") c.safety = SafetyMode::hover;
      else if (v == "zero") c.safety = SafetyMode::zero;
      else throw ScenarioError(n, "controller.safety must be 'hover' or 'zero'");
      return;
    }
    if (key == "limits.thrust_factor") { c.thrust_limit_factor = num(v, n, key); return; }
    if (key == "limits.speed_factor") { c.speed_limit_factor = num(v, n, key); return; }
    if (key == "fault.mute_plant_at_s") { c.mute_plant_at_s = num(v, n, key); return; }
    if (key == "output.csv") { c.output_csv = std::string(v); return; }
    if (key == "gains.altitude.kp") { alt_kp_ = num(v, n, key); alt_line_ = n; return; }
    if (key == "gains.altitude.kd") { alt_kd_ = num(v, n, key); alt_line_ = n; return; }
    if (key == "gains.altitude.fit_overshoot") { c.altitude_fit_overshoot = num(v, n, key); return; }
    if (key == "gains.altitude.fit_peak_time_s") {
      c.altitude_fit_peak_time_s = num(v, n, key);
      return;
    }

    const std::vector<std::string_view> parts = split_dots(key);
    if (parts.size() == 2 && parts[0] == "quad") {
      if (double* field = quad_field(parts[1])) {
        *field = num(v, n, key);
        return;
      }
    }
    if (parts.size() == 3 && parts[0] == "lqr") {
      if (LqrWeights* w = channel_weights(parts[1])) {
        if (parts[2] == "q1") { w->q1 = num(v, n, key); return; }
        if (parts[2] == "q2") { w->q2 = num(v, n, key); return; }
        if (parts[2] == "r") { w->r = num(v, n, key); return; }
      }
    }
    if (parts.size() == 3 && parts[0] == "gains") {
      if (PartialGains* g = channel_gains(parts[1])) {
        if (parts[2] == "k1" || parts[2] == "k2") {
          (parts[2] == "k1" ? g->k1 : g->k2) = num(v, n, key);
          g->line = n;
          return;
        }
      }
    }
    if (parts.size() == 3 && parts[0] == "setpoint") {
      const auto index = parse_int<std::size_t>(parts[1], n, key);
      PartialSetpoint& sp = setpoints_[index];
      sp.line = std::max(sp.line, n);
      Setpoint& s = sp.entry.setpoint;
      if (parts[2] == "t") { sp.entry.t = num(v, n, key); return; }
      if (parts[2] == "z_des") { s.z_des = num(v, n, key); return; }
      if (parts[2] == "phi_des") { s.roll_des = num(v, n, key); return; }
      if (parts[2] == "theta_des") { s.pitch_des = num(v, n, key); return; }
      if (parts[2] == "psi_des") { s.yaw_des = num(v, n, key); return; }
    }
    throw ScenarioError(n, "unknown key '" + key + "'");
  }

  double* quad_field(std::string_view name) {
    QuadParams& q = cfg_.quad;
    if (name == "mass") return &q.mass;
    if (name == "gravity") return &q.gravity;
    if (name == "ixx") return &q.ixx;
    if (name == "iyy") return &q.iyy;
    if (name == "izz") return &q.izz;
    if (name == "arm_length") return &q.arm_length;
    if (name == "thrust_coeff") return &q.thrust_coeff;
    if (name == "torque_coeff") return &q.torque_coeff;
    return nullptr;
  }

  LqrWeights* channel_weights(std::string_view ch) {
    if (ch == "roll") return &cfg_.roll_weights;
    if (ch == "pitch") return &cfg_.pitch_weights;
    if (ch == "yaw") return &cfg_.yaw_weights;
    return nullptr;
  }

  PartialGains* channel_gains(std::string_view ch) {
    if (ch == "roll") return &gains_[0];
    if (ch == "pitch") return &gains_[1];
    if (ch == "yaw") return &gains_[2];
    return nullptr;
  }

  std::size_t line_of(const std::string& key) const {
    const auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
  }

  ScenarioConfig finish() {
    ScenarioConfig& c = cfg_;
    std::optional<ChannelGains>* targets[] = {&c.roll_gains, &c.pitch_gains, &c.yaw_gains};
    for (std::size_t i = 0; i < 3; ++i) {
      const PartialGains& g = gains_[i];
      if (!g.k1 && !g.k2) continue;
      if (!g.k1 || !g.k2) throw ScenarioError(g.line, "gain override needs both k1 and k2");
      *targets[i] = ChannelGains{*g.k1, *g.k2};
    }
    if (alt_kp_ || alt_kd_) {
      if (!alt_kp_ || !alt_kd_) {
        throw ScenarioError(alt_line_, "altitude gain override needs both kp and kd");
      }
      c.altitude_gains = AltitudeGains{*alt_kp_, *alt_kd_};
    }
    for (const auto& [index, sp] : setpoints_) c.schedule.push_back(sp.entry);
    std::stable_sort(c.schedule.begin(), c.schedule.end(),
                     [](const auto& a, const auto& b) { return a.t < b.t; });

    // Invariants, reported against the line that set the offending key.
    if (!(c.duration_s > 0.0)) throw ScenarioError(line_of("duration_s"), "duration_s must be > 0");
    try {
      rate_ratio(c.plant_rate_hz, c.controller_rate_hz);
    } catch (const Fault& f) {
      throw ScenarioError(std::max(line_of("plant_rate_hz"), line_of("controller_rate_hz")),
                          f.what());
    }
    for (const auto& [index, sp] : setpoints_) {
      const Setpoint& s = sp.entry.setpoint;
      if (!(std::abs(s.roll_des) < 0.5 && std::abs(s.pitch_des) < 0.5)) {
        throw ScenarioError(sp.line, "setpoint " + std::to_string(index) +
                                         ": |phi_des| and |theta_des| must be < 0.5 rad");
      }
      if (sp.entry.t < 0.0) throw ScenarioError(sp.line, "setpoint time must be >= 0");
    }
    try {
      c.validate();
    } catch (const ScenarioError&) {
      throw;
    } catch (const Fault& f) {
      throw ScenarioError(0, f.what());
    }
    return c;
  }

  ScenarioConfig cfg_;
  std::map<std::string, std::size_t> lines_;
  std::map<std::size_t, PartialSetpoint> setpoints_;
  std::array<PartialGains, 3> gains_{};
  std::optional<double> alt_kp_, alt_kd_;
  std::size_t alt_line_ = 0;
};

}  // namespace

void ScenarioConfig::validate() const {
  if (!(duration_s > 0.0)) throw ScenarioError(0, "duration_s must be > 0");
  rate_ratio(plant_rate_hz, controller_rate_hz);
  quad.validate();
  roll_weights.validate();
  pitch_weights.validate();
  yaw_weights.validate();
  if (!(thrust_limit_factor > 0.0 && speed_limit_factor > 0.0)) {
    throw ScenarioError(0, "limit factors must be positive");
  }
  if (mute_plant_at_s && *mute_plant_at_s < 0.0) {
    throw ScenarioError(0, "fault.mute_plant_at_s must be >= 0");
  }
  make_controller_config(*this);
}

ScenarioConfig parse_scenario(std::string_view text) { return Parser{}.run(text); }

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Fault(FaultKind::io, "cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(e.line(), path.string() + ": " + e.what());
  }
}

ControllerConfig make_controller_config(const ScenarioConfig& c) {
  ControllerConfig out;
  out.rate_hz = c.controller_rate_hz;
  out.staleness_budget_s = c.staleness_budget_s;
  out.attitude.roll = c.roll_gains ? *c.roll_gains : solve_channel_are(c.quad.ixx, c.roll_weights);
  out.attitude.pitch =
      c.pitch_gains ? *c.pitch_gains : solve_channel_are(c.quad.iyy, c.pitch_weights);
  out.attitude.yaw = c.yaw_gains ? *c.yaw_gains : solve_channel_are(c.quad.izz, c.yaw_weights);
  out.altitude = c.altitude_gains
                     ? *c.altitude_gains
                     : fit_altitude_gains(c.altitude_fit_overshoot, c.altitude_fit_peak_time_s,
                                          c.quad);
  out.schedule = c.schedule;
  out.safety_command = c.safety == SafetyMode::hover ? hover_speeds(c.quad) : MotorSpeeds{};
  out.limits = ActuatorLimits::scaled(c.quad, c.thrust_limit_factor, c.speed_limit_factor);
  out.validate();
  return out;
}

}  // namespace qsim

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsim/control/controller.hpp"
#include "qsim/control/lqr.hpp"
#include "qsim/dynamics/types.hpp"
#include "qsim/fault.hpp"
#include "qsim/middleware/udp.hpp"

namespace qsim {

enum class TransportKind { lockstep, udp };
enum class SafetyMode { hover, zero };

/// One experiment.  Every field has a default so an empty scenario file is a
/// valid 15 s hover run of the reference airframe.
struct ScenarioConfig {
  double duration_s = 15.0;
  double plant_rate_hz = 100.0;
  double controller_rate_hz = 50.0;
  TransportKind transport = TransportKind::lockstep;
  UdpEndpoints udp;

  QuadParams quad;
  RotationalModel rotational_model = RotationalModel::full;

  LqrWeights roll_weights;
  LqrWeights pitch_weights;
  LqrWeights yaw_weights;
  std::optional<ChannelGains> roll_gains;   // overrides the LQR synthesis
  std::optional<ChannelGains> pitch_gains;
  std::optional<ChannelGains> yaw_gains;

  double altitude_fit_overshoot = 0.18;
  double altitude_fit_peak_time_s = 2.5;
  std::optional<AltitudeGains> altitude_gains;  // overrides the fit

  double staleness_budget_s = 0.1;
  SafetyMode safety = SafetyMode::hover;
  double thrust_limit_factor = 2.0;  // x m g
  double speed_limit_factor = 2.0;   // x hover speed

  std::vector<ScheduledSetpoint> schedule;
  std::optional<double> mute_plant_at_s;
  std::string output_csv;

  /// Throws ScenarioError (line 0) on invariant violations.
  void validate() const;
};

class ScenarioError : public Fault {
 public:
  ScenarioError(std::size_t line, const std::string& what)
      : Fault(FaultKind::scenario, line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses the flat `dotted.key = value` format.  `#` starts a comment; unknown
/// keys, malformed values and invariant violations raise ScenarioError.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Resolves gains (LQR synthesis, altitude fit, overrides), limits and the
/// safety command into the controller's configuration.
ControllerConfig make_controller_config(const ScenarioConfig& cfg);

}  // namespace qsim

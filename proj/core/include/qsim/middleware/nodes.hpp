#pragma once

#include <cstdint>

#include "qsim/control/allocation.hpp"
#include "qsim/control/controller.hpp"
#include "qsim/dynamics/types.hpp"
#include "qsim/middleware/bus.hpp"

namespace qsim {

/// Simulated vehicle.  Subscribes to motor commands and publishes pose,
/// velocity and IMU topics.
class PlantNode {
 public:
  PlantNode(Transport& transport, const QuadParams& params, RotationalModel model,
            const VehicleState& initial = {});

  void publish_state(std::int64_t stamp_ns);

  /// Advances by dt under the newest received command (all zero before the
  /// first one).  Faults from the integrator propagate.
  void step(double dt);

  const VehicleState& state() const noexcept { return state_; }
  MotorSpeeds current_command() const;
  std::size_t steps() const noexcept { return steps_; }

 private:
  Transport& transport_;
  QuadParams params_;
  RotationalModel model_;
  VehicleState state_;
  double t0_;
  std::size_t steps_ = 0;
  Subscription commands_;
};

/// Controller node: keep-last-1 subscriptions on the three state topics and a
/// timer-driven tick that publishes motor commands.
class ControllerNode {
 public:
  ControllerNode(Transport& transport, const QuadParams& params, ControllerConfig config);

  SensorSnapshot snapshot() const;

  /// Runs control_loop_tick on the current snapshot and publishes the result
  /// stamped with clock.now_ns.
  TickOutput tick(const ControllerClock& clock);

  /// Sequence number of the last published command.
  std::uint64_t last_seq() const noexcept { return last_seq_; }

  const ControllerConfig& config() const noexcept { return config_; }
  void set_schedule(std::vector<ScheduledSetpoint> schedule);
  void set_gains(const AltitudeGains& altitude, const AttitudeGains& attitude);

 private:
  Transport& transport_;
  QuadParams params_;
  ControllerConfig config_;
  MotorAllocator allocator_;
  Subscription imu_;
  Subscription pose_;
  Subscription velocity_;
  std::uint64_t last_seq_ = 0;
};

}  // namespace qsim

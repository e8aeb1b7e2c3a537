#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsim/control/controller.hpp"
#include "qsim/dynamics/types.hpp"
#include "qsim/fault.hpp"
#include "qsim/middleware/messages.hpp"

namespace qsim {

/// Plant state at one plant tick together with the motor command the plant
/// holds at that instant.
struct TraceSample {
  VehicleState state;
  MotorSpeeds command;
};

struct CommandRecord {
  std::int64_t t_ns = 0;  // mission time of the controller tick
  std::uint64_t seq = 0;
  MotorSpeeds speeds;
  TickPath path = TickPath::nominal;
};

/// One received datagram (UDP mode).  Both stamps are monotonic-clock ns.
struct FrameRecord {
  TopicId topic = TopicId::motor_commands;
  std::uint64_t seq = 0;
  std::int64_t stamp_ns = 0;
  std::int64_t recv_ns = 0;
};

struct FaultRecord {
  FaultKind kind = FaultKind::non_finite_state;
  double t = 0.0;  // simulation time of death
  std::string message;
};

struct Trace {
  std::vector<TraceSample> samples;
  std::vector<CommandRecord> commands;
  std::vector<std::vector<std::uint8_t>> message_log;  // lockstep only
  std::vector<FrameRecord> plant_rx;                   // UDP only
  std::vector<FrameRecord> controller_rx;              // UDP only
  std::size_t plant_steps = 0;
  std::size_t controller_ticks = 0;
  std::optional<FaultRecord> fault;
};

}  // namespace qsim

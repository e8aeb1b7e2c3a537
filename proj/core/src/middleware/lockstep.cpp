#include "qsim/middleware/lockstep.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace qsim {

int rate_ratio(double plant_rate_hz, double controller_rate_hz) {
  if (!(plant_rate_hz > 0.0 && controller_rate_hz > 0.0) || !std::isfinite(plant_rate_hz) ||
      !std::isfinite(controller_rate_hz)) {
    throw Fault(FaultKind::configuration, "rates must be finite and positive");
  }
  const double ratio = plant_rate_hz / controller_rate_hz;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    std::ostringstream os;
    os << "plant rate " << plant_rate_hz << " Hz is not an integer multiple of controller rate "
       << controller_rate_hz << " Hz";
    throw Fault(FaultKind::configuration, os.str());
  }
  return static_cast<int>(rounded);
}

Trace lockstep_run(PlantNode& plant, ControllerNode& controller, Bus& bus,
                   const LockstepOptions& options) {
  const int ratio = rate_ratio(options.plant_rate_hz, options.controller_rate_hz);
  if (!(options.duration_s >= 0.0)) {
    throw Fault(FaultKind::configuration, "duration must be non-negative");
  }
  const double dt = 1.0 / options.plant_rate_hz;
  const std::int64_t period_ns = std::llround(1e9 / options.plant_rate_hz);
  const auto steps = static_cast<std::size_t>(std::llround(options.duration_s * options.plant_rate_hz));
  const std::int64_t mute_ns = options.mute_plant_at_s
                                   ? std::llround(*options.mute_plant_at_s * 1e9)
                                   : std::numeric_limits<std::int64_t>::max();

  Trace trace;
  if (steps == 0) return trace;

  bus.enable_log(options.log_messages);
  trace.samples.reserve(steps + 1);
  trace.commands.reserve(steps / static_cast<std::size_t>(ratio) + 1);

  auto publish = [&](std::int64_t now) {
    bus.set_now(now);
    if (now < mute_ns) plant.publish_state(now);
  };

  for (std::size_t k = 0; k < steps; ++k) {
    const auto now = static_cast<std::int64_t>(k) * period_ns;
    publish(now);
    if (k % static_cast<std::size_t>(ratio) == 0) {
      const TickOutput out = controller.tick({now, now});
      trace.commands.push_back({now, controller.last_seq(), out.speeds, out.path});
      ++trace.controller_ticks;
    }
    trace.samples.push_back({plant.state(), plant.current_command()});
    try {
      plant.step(dt);
    } catch (const Fault& f) {
      trace.fault = FaultRecord{f.kind(), plant.state().t, f.what()};
      break;
    }
    ++trace.plant_steps;
  }

  if (!trace.fault) {
    publish(static_cast<std::int64_t>(steps) * period_ns);
    trace.samples.push_back({plant.state(), plant.current_command()});
  }
  trace.message_log = bus.frame_log();
  return trace;
}

}  // namespace qsim

#pragma once

#include <optional>

#include "qsim/middleware/bus.hpp"
#include "qsim/middleware/nodes.hpp"
#include "qsim/middleware/trace.hpp"

namespace qsim {

struct LockstepOptions {
  double plant_rate_hz = 100.0;
  double controller_rate_hz = 50.0;
  double duration_s = 15.0;
  /// Plant stops publishing state from this time on (it keeps integrating).
  std::optional<double> mute_plant_at_s;
  bool log_messages = true;
};

/// Integer number of plant ticks per controller tick.  Throws a configuration
/// fault if the ratio is not a positive integer.
int rate_ratio(double plant_rate_hz, double controller_rate_hz);

/// Drives both nodes on a shared virtual clock.  Every plant tick the plant
/// publishes its state; on every rate_ratio-th tick the controller runs after
/// those publications; then the plant integrates one period.  A fault stops
/// the run and is recorded in the returned trace.
Trace lockstep_run(PlantNode& plant, ControllerNode& controller, Bus& bus,
                   const LockstepOptions& options);

}  // namespace qsim

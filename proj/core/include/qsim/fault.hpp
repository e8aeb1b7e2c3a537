#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsim {

enum class FaultKind {
  gimbal_lock,
  non_finite_state,
  configuration,
  solver,
  encode,
  decode,
  scenario,
  io,
  transport,
};

std::string_view to_string(FaultKind kind) noexcept;

/// Base error for everything that can stop a run.  Carries a machine-readable
/// kind so callers (the CLI, the runner) can map faults without string checks.
class Fault : public std::runtime_error {
 public:
  Fault(FaultKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  FaultKind kind() const noexcept { return kind_; }

 private:
  FaultKind kind_;
};

}  // namespace qsim

#include "qsim/fault.hpp"

namespace qsim {

std::string_view to_string(FaultKind kind) noexcept {
  switch (kind) {
    case FaultKind::gimbal_lock: return "gimbal_lock";
    case FaultKind::non_finite_state: return "non_finite_state";
    case FaultKind::configuration: return "configuration";
    case FaultKind::solver: return "solver";
    case FaultKind::encode: return "encode";
    case FaultKind::decode: return "decode";
    case FaultKind::scenario: return "scenario";
    case FaultKind::io: return "io";
    case FaultKind::transport: return "transport";
  }
  return "unknown";
}

}  // namespace qsim

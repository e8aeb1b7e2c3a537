#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

namespace qsim {

enum class TopicId : std::uint8_t {
  motor_commands = 1,
  pose = 2,
  velocity = 3,
  imu = 4,
};

inline constexpr std::array<TopicId, 4> kAllTopics = {TopicId::motor_commands, TopicId::pose,
                                                      TopicId::velocity, TopicId::imu};

std::string_view topic_name(TopicId id) noexcept;
std::optional<TopicId> topic_from_name(std::string_view name) noexcept;
std::optional<TopicId> topic_from_wire(std::uint8_t id) noexcept;

/// position xyz (m, ENU) then orientation w, x, y, z.
struct PosePayload {
  std::array<double, 3> position{};
  std::array<double, 4> orientation{1.0, 0.0, 0.0, 0.0};
  bool operator==(const PosePayload&) const = default;
};

/// linear (m/s) then angular (rad/s).
struct TwistPayload {
  std::array<double, 3> linear{};
  std::array<double, 3> angular{};
  bool operator==(const TwistPayload&) const = default;
};

/// orientation w, x, y, z then body rates p, q, r.
struct ImuPayload {
  std::array<double, 4> orientation{1.0, 0.0, 0.0, 0.0};
  std::array<double, 3> angular_velocity{};
  bool operator==(const ImuPayload&) const = default;
};

struct MotorCommandPayload {
  std::array<double, 4> speeds{};
  bool operator==(const MotorCommandPayload&) const = default;
};

using Payload = std::variant<MotorCommandPayload, PosePayload, TwistPayload, ImuPayload>;

/// Payload type registered for a topic, as the variant index.
std::size_t payload_index(TopicId id) noexcept;

/// Packed payload size in bytes: 32 / 56 / 48 / 56.
std::size_t payload_size(TopicId id) noexcept;

struct TopicMessage {
  TopicId topic = TopicId::motor_commands;
  std::uint64_t seq = 0;
  std::int64_t stamp_ns = 0;
  Payload payload;

  bool operator==(const TopicMessage&) const = default;
};

}  // namespace qsim

#include "qsim/middleware/codec.hpp"

#include <bit>
#include <sstream>

namespace qsim {

std::string_view topic_name(TopicId id) noexcept {
  switch (id) {
    case TopicId::motor_commands: return "/drone/motor_commands";
    case TopicId::pose: return "/drone/Pose";
    case TopicId::velocity: return "/drone/Velocity";
    case TopicId::imu: return "/drone/Imu";
  }
  return "";
}

std::optional<TopicId> topic_from_name(std::string_view name) noexcept {
  for (TopicId id : kAllTopics) {
    if (topic_name(id) == name) return id;
  }
  return std::nullopt;
}

std::optional<TopicId> topic_from_wire(std::uint8_t id) noexcept {
  if (id >= 1 && id <= 4) return static_cast<TopicId>(id);
  return std::nullopt;
}

std::size_t payload_index(TopicId id) noexcept {
  switch (id) {
    case TopicId::motor_commands: return 0;
    case TopicId::pose: return 1;
    case TopicId::velocity: return 2;
    case TopicId::imu: return 3;
  }
  return std::variant_npos;
}

std::size_t payload_size(TopicId id) noexcept {
  switch (id) {
    case TopicId::motor_commands: return 4 * sizeof(double);
    case TopicId::pose: return 7 * sizeof(double);
    case TopicId::velocity: return 6 * sizeof(double);
    case TopicId::imu: return 7 * sizeof(double);
  }
  return 0;
}

std::string_view to_string(DecodeErrc code) noexcept {
  switch (code) {
    case DecodeErrc::bad_magic: return "bad_magic";
    case DecodeErrc::unsupported_version: return "unsupported_version";
    case DecodeErrc::unknown_topic: return "unknown_topic";
    case DecodeErrc::length_mismatch: return "length_mismatch";
    case DecodeErrc::truncated: return "truncated";
    case DecodeErrc::trailing_bytes: return "trailing_bytes";
  }
  return "unknown";
}

namespace {

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { le(v, 2); }
  void u64(std::uint64_t v) { le(v, 8); }
  void i64(std::int64_t v) { le(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  template <std::size_t N>
  void f64s(const std::array<double, N>& a) {
    for (double v : a) f64(v);
  }

 private:
  void le(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() { return in_[pos_++]; }
  std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
  std::uint64_t u64() { return le(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(le(8)); }
  double f64() { return std::bit_cast<double>(le(8)); }
  template <std::size_t N>
  void f64s(std::array<double, N>& a) {
    for (double& v : a) v = f64();
  }

 private:
  std::uint64_t le(int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in_[pos_++]) << (8 * i);
    return v;
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

[[noreturn]] void decode_fail(DecodeErrc code, const std::string& detail) {
  throw DecodeError(code, "decode " + std::string(to_string(code)) + ": " + detail);
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const TopicMessage& msg) {
  if (!topic_from_wire(static_cast<std::uint8_t>(msg.topic))) {
    throw Fault(FaultKind::encode, "encode: unknown topic id");
  }
  if (msg.payload.index() != payload_index(msg.topic)) {
    throw Fault(FaultKind::encode, "encode: payload type does not match topic " +
                                       std::string(topic_name(msg.topic)));
  }
  const std::size_t body = payload_size(msg.topic);
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderSize + body);
  Writer w(out);
  for (std::uint8_t b : kFrameMagic) w.u8(b);
  w.u8(kFrameVersion);
  w.u8(static_cast<std::uint8_t>(msg.topic));
  w.u64(msg.seq);
  w.i64(msg.stamp_ns);
  w.u16(static_cast<std::uint16_t>(body));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, MotorCommandPayload>) {
          w.f64s(p.speeds);
        } else if constexpr (std::is_same_v<T, PosePayload>) {
          w.f64s(p.position);
          w.f64s(p.orientation);
        } else if constexpr (std::is_same_v<T, TwistPayload>) {
          w.f64s(p.linear);
          w.f64s(p.angular);
        } else {
          w.f64s(p.orientation);
          w.f64s(p.angular_velocity);
        }
      },
      msg.payload);
  return out;
}

TopicMessage decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kFrameHeaderSize) {
    // A short buffer that does not even start with the magic is not a frame.
    for (std::size_t i = 0; i < std::min<std::size_t>(bytes.size(), 4); ++i) {
      if (bytes[i] != kFrameMagic[i]) decode_fail(DecodeErrc::bad_magic, "magic mismatch");
    }
    std::ostringstream os;
    os << bytes.size() << " bytes, header needs " << kFrameHeaderSize;
    decode_fail(DecodeErrc::truncated, os.str());
  }

  Reader r(bytes);
  for (std::uint8_t expected : kFrameMagic) {
    if (r.u8() != expected) decode_fail(DecodeErrc::bad_magic, "magic mismatch");
  }
  const std::uint8_t version = r.u8();
  if (version != kFrameVersion) {
    decode_fail(DecodeErrc::unsupported_version, "version " + std::to_string(version));
  }
  const std::uint8_t raw_topic = r.u8();
  const std::optional<TopicId> topic = topic_from_wire(raw_topic);
  if (!topic) decode_fail(DecodeErrc::unknown_topic, "topic id " + std::to_string(raw_topic));

  TopicMessage msg;
  msg.topic = *topic;
  msg.seq = r.u64();
  msg.stamp_ns = r.i64();
  const std::size_t declared = r.u16();
  const std::size_t expected = payload_size(*topic);
  if (declared != expected) {
    std::ostringstream os;
    os << "payload_len " << declared << " but " << topic_name(*topic) << " carries " << expected;
    decode_fail(DecodeErrc::length_mismatch, os.str());
  }
  const std::size_t available = bytes.size() - kFrameHeaderSize;
  if (available < expected) {
    std::ostringstream os;
    os << "payload has " << available << " of " << expected << " bytes";
    decode_fail(DecodeErrc::truncated, os.str());
  }
  if (available > expected) {
    std::ostringstream os;
    os << available - expected << " bytes after payload";
    decode_fail(DecodeErrc::trailing_bytes, os.str());
  }

  switch (*topic) {
    case TopicId::motor_commands: {
      MotorCommandPayload p;
      r.f64s(p.speeds);
      msg.payload = p;
      break;
    }
    case TopicId::pose: {
      PosePayload p;
      r.f64s(p.position);
      r.f64s(p.orientation);
      msg.payload = p;
      break;
    }
    case TopicId::velocity: {
      TwistPayload p;
      r.f64s(p.linear);
      r.f64s(p.angular);
      msg.payload = p;
      break;
    }
    case TopicId::imu: {
      ImuPayload p;
      r.f64s(p.orientation);
      r.f64s(p.angular_velocity);
      msg.payload = p;
      break;
    }
  }
  return msg;
}

}  // namespace qsim

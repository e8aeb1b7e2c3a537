#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qsim/fault.hpp"
#include "qsim/middleware/messages.hpp"

namespace qsim {

// Frame layout, little-endian:
//   0  magic "QSIM"     4 bytes
//   4  version          u8 (= 1)
//   5  topic id         u8
//   6  seq              u64
//  14  stamp_ns         i64
//  22  payload_len      u16
//  24  payload          packed f64
inline constexpr std::array<std::uint8_t, 4> kFrameMagic = {'Q', 'S', 'I', 'M'};
inline constexpr std::uint8_t kFrameVersion = 1;
inline constexpr std::size_t kFrameHeaderSize = 24;
inline constexpr std::size_t kMaxFrameSize = kFrameHeaderSize + 56;

enum class DecodeErrc {
  bad_magic,
  unsupported_version,
  unknown_topic,
  length_mismatch,
  truncated,
  trailing_bytes,
};

std::string_view to_string(DecodeErrc code) noexcept;

class DecodeError : public Fault {
 public:
  DecodeError(DecodeErrc code, const std::string& what)
      : Fault(FaultKind::decode, what), code_(code) {}
  DecodeErrc code() const noexcept { return code_; }

 private:
  DecodeErrc code_;
};

/// Throws FaultKind::encode if the payload type does not match the topic.
std::vector<std::uint8_t> encode_frame(const TopicMessage& msg);

/// Throws DecodeError.  Never returns a partially decoded message.
TopicMessage decode_frame(std::span<const std::uint8_t> bytes);

}  // namespace qsim

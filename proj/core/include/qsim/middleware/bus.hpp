#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "qsim/middleware/messages.hpp"

namespace qsim {

struct Received {
  TopicMessage message;
  std::int64_t received_ns = 0;  // receiver clock
};

/// Keep-last-1 mailbox.  Replace and read are atomic with respect to each
/// other; an offer with a seq not newer than the stored one is discarded.
class LatestSlot {
 public:
  /// Returns false if the message was discarded as stale.
  bool offer(const TopicMessage& msg, std::int64_t received_ns);
  std::optional<Received> latest() const;
  std::uint64_t discarded() const;

 private:
  mutable std::mutex mu_;
  std::optional<Received> value_;
  std::uint64_t discarded_ = 0;
};

/// Read handle on a topic's newest message.
class Subscription {
 public:
  Subscription() = default;
  explicit Subscription(std::shared_ptr<LatestSlot> slot) : slot_(std::move(slot)) {}

  /// nullopt means "never received".
  std::optional<Received> latest() const { return slot_ ? slot_->latest() : std::nullopt; }
  bool valid() const noexcept { return slot_ != nullptr; }

 private:
  std::shared_ptr<LatestSlot> slot_;
};

/// What nodes talk to.  Each endpoint is the single publisher of the topics it
/// publishes, so sequence numbers are kept per topic.
class Transport {
 public:
  virtual ~Transport() = default;

  /// Stamps the next sequence number and sends.  Returns the sent message.
  virtual TopicMessage publish(TopicId topic, const Payload& payload, std::int64_t stamp_ns) = 0;
  virtual Subscription subscribe(TopicId topic) = 0;
};

/// Deterministic in-process transport.  Every message goes through the wire
/// codec and is delivered immediately, stamped with the bus's current time.
class Bus final : public Transport {
 public:
  Bus() = default;

  /// Registers a topic; unregistered topics fault on publish and subscribe.
  void register_topic(TopicId topic);
  void register_all_topics();
  bool is_registered(TopicId topic) const noexcept;

  void set_now(std::int64_t now_ns) noexcept { now_ns_ = now_ns; }
  std::int64_t now() const noexcept { return now_ns_; }

  /// Suppress delivery (and logging) on a topic, e.g. to simulate a silent node.
  void set_muted(TopicId topic, bool muted);

  TopicMessage publish(TopicId topic, const Payload& payload, std::int64_t stamp_ns) override;
  Subscription subscribe(TopicId topic) override;

  void enable_log(bool on) noexcept { log_enabled_ = on; }
  /// Encoded frames in publication order.
  const std::vector<std::vector<std::uint8_t>>& frame_log() const noexcept { return log_; }

 private:
  struct TopicState {
    bool registered = false;
    bool muted = false;
    std::uint64_t next_seq = 0;
    std::vector<std::shared_ptr<LatestSlot>> subscribers;
  };
  TopicState& state(TopicId topic);

  std::array<TopicState, 5> topics_{};
  std::int64_t now_ns_ = 0;
  bool log_enabled_ = false;
  std::vector<std::vector<std::uint8_t>> log_;
};

}  // namespace qsim

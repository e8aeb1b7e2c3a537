#include "qsim/middleware/bus.hpp"

#include "qsim/fault.hpp"
#include "qsim/middleware/codec.hpp"

namespace qsim {

bool LatestSlot::offer(const TopicMessage& msg, std::int64_t received_ns) {
  std::lock_guard lock(mu_);
  if (value_ && msg.seq <= value_->message.seq) {
    ++discarded_;
    return false;
  }
  value_ = Received{msg, received_ns};
  return true;
}

std::optional<Received> LatestSlot::latest() const {
  std::lock_guard lock(mu_);
  return value_;
}

std::uint64_t LatestSlot::discarded() const {
  std::lock_guard lock(mu_);
  return discarded_;
}

Bus::TopicState& Bus::state(TopicId topic) {
  const auto idx = static_cast<std::size_t>(topic);
  if (idx == 0 || idx >= topics_.size() || !topics_[idx].registered) {
    throw Fault(FaultKind::configuration,
                "topic id " + std::to_string(idx) + " is not registered on the bus");
  }
  return topics_[idx];
}

void Bus::register_topic(TopicId topic) {
  const auto idx = static_cast<std::size_t>(topic);
  if (idx == 0 || idx >= topics_.size()) {
    throw Fault(FaultKind::configuration, "cannot register unknown topic id");
  }
  topics_[idx].registered = true;
}

void Bus::register_all_topics() {
  for (TopicId t : kAllTopics) register_topic(t);
}

bool Bus::is_registered(TopicId topic) const noexcept {
  const auto idx = static_cast<std::size_t>(topic);
  return idx > 0 && idx < topics_.size() && topics_[idx].registered;
}

void Bus::set_muted(TopicId topic, bool muted) { state(topic).muted = muted; }

TopicMessage Bus::publish(TopicId topic, const Payload& payload, std::int64_t stamp_ns) {
  TopicState& ts = state(topic);
  TopicMessage msg{topic, ts.next_seq++, stamp_ns, payload};
  const std::vector<std::uint8_t> frame = encode_frame(msg);
  if (ts.muted) return msg;

  // Subscribers see exactly what a remote peer would decode.
  const TopicMessage delivered = decode_frame(frame);
  if (log_enabled_) log_.push_back(frame);
  for (const auto& slot : ts.subscribers) slot->offer(delivered, now_ns_);
  return msg;
}

Subscription Bus::subscribe(TopicId topic) {
  auto slot = std::make_shared<LatestSlot>();
  state(topic).subscribers.push_back(slot);
  return Subscription(std::move(slot));
}

}  // namespace qsim

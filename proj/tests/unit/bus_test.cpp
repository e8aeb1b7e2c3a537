#include <atomic>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "qsim/fault.hpp"
#include "qsim/middleware/bus.hpp"
#include "qsim/middleware/codec.hpp"
#include "test_support.hpp"

namespace qsim {
namespace {

TEST(BusTest, SubscriberReadsPublishedMessage) {
  Bus bus;
  bus.register_all_topics();
  Subscription sub = bus.subscribe(TopicId::imu);
  EXPECT_FALSE(sub.latest());

  bus.set_now(40'000'000);
  const ImuPayload imu{{0.5, 0.5, 0.5, 0.5}, {1, 2, 3}};
  const TopicMessage sent = bus.publish(TopicId::imu, imu, 30'000'000);
  const auto got = sub.latest();
  ASSERT_TRUE(got);
  EXPECT_EQ(got->message, sent);
  EXPECT_EQ(std::get<ImuPayload>(got->message.payload), imu);
  EXPECT_EQ(got->message.stamp_ns, 30'000'000);
  EXPECT_EQ(got->received_ns, 40'000'000);
}

TEST(BusTest, KeepsOnlyNewest) {
  Bus bus;
  bus.register_all_topics();
  Subscription sub = bus.subscribe(TopicId::motor_commands);
  for (int i = 0; i < 5; ++i) {
    bus.publish(TopicId::motor_commands, MotorCommandPayload{{double(i), 0, 0, 0}}, i);
  }
  const auto got = sub.latest();
  EXPECT_EQ(std::get<MotorCommandPayload>(got->message.payload).speeds[0], 4.0);
  EXPECT_EQ(got->message.seq, 4u);
}

TEST(BusTest, SequenceNumbersArePerTopic) {
  Bus bus;
  bus.register_all_topics();
  EXPECT_EQ(bus.publish(TopicId::pose, PosePayload{}, 0).seq, 0u);
  EXPECT_EQ(bus.publish(TopicId::imu, ImuPayload{}, 0).seq, 0u);
  EXPECT_EQ(bus.publish(TopicId::pose, PosePayload{}, 0).seq, 1u);
}

TEST(BusTest, UnregisteredTopicFaults) {
  Bus bus;
  bus.register_topic(TopicId::pose);
  EXPECT_NO_THROW(bus.subscribe(TopicId::pose));
  try {
    bus.publish(TopicId::imu, ImuPayload{}, 0);
    FAIL();
  } catch (const Fault& f) {
    EXPECT_EQ(f.kind(), FaultKind::configuration);
  }
  EXPECT_THROW(bus.subscribe(TopicId::velocity), Fault);
}

TEST(BusTest, WrongPayloadTypeFaults) {
  Bus bus;
  bus.register_all_topics();
  EXPECT_THROW(bus.publish(TopicId::pose, ImuPayload{}, 0), Fault);
}

TEST(BusTest, MutedTopicDeliversNothing) {
  Bus bus;
  bus.register_all_topics();
  bus.enable_log(true);
  Subscription sub = bus.subscribe(TopicId::velocity);
  bus.set_muted(TopicId::velocity, true);
  bus.publish(TopicId::velocity, TwistPayload{}, 0);
  EXPECT_FALSE(sub.latest());
  EXPECT_TRUE(bus.frame_log().empty());
  bus.set_muted(TopicId::velocity, false);
  bus.publish(TopicId::velocity, TwistPayload{}, 0);
  EXPECT_TRUE(sub.latest());
}

TEST(BusTest, LogHoldsEncodedFrames) {
  Bus bus;
  bus.register_all_topics();
  bus.enable_log(true);
  const TopicMessage m = bus.publish(TopicId::pose, PosePayload{{1, 2, 3}, {1, 0, 0, 0}}, 5);
  ASSERT_EQ(bus.frame_log().size(), 1u);
  EXPECT_EQ(bus.frame_log()[0], encode_frame(m));
}

TEST(LatestSlotTest, DiscardsOlderSequence) {
  LatestSlot slot;
  TopicMessage m{TopicId::pose, 5, 0, PosePayload{}};
  EXPECT_TRUE(slot.offer(m, 1));
  m.seq = 3;
  EXPECT_FALSE(slot.offer(m, 2));
  m.seq = 5;
  EXPECT_FALSE(slot.offer(m, 3));
  EXPECT_EQ(slot.discarded(), 2u);
  EXPECT_EQ(slot.latest()->received_ns, 1);
  m.seq = 6;
  EXPECT_TRUE(slot.offer(m, 4));
  EXPECT_EQ(slot.latest()->message.seq, 6u);
}

TEST(LatestSlotTest, ConcurrentReadersNeverSeeTornMessages) {
  // Writer publishes messages whose fields are all derived from seq; any mix
  // of two messages would break the relation.
  LatestSlot slot;
  std::atomic<bool> done{false};
  std::thread writer([&] {
    for (std::uint64_t s = 1; s <= 50'000; ++s) {
      const double v = static_cast<double>(s);
      slot.offer({TopicId::imu, s, static_cast<std::int64_t>(s),
                  ImuPayload{{v, v, v, v}, {v, v, v}}},
                 static_cast<std::int64_t>(s));
    }
    done = true;
  });
  std::uint64_t last = 0, reads = 0;
  while (!done || reads == 0) {
    const auto r = slot.latest();
    if (!r) continue;
    ++reads;
    const auto& imu = std::get<ImuPayload>(r->message.payload);
    const double v = static_cast<double>(r->message.seq);
    ASSERT_EQ(r->received_ns, static_cast<std::int64_t>(r->message.seq));
    for (double x : imu.orientation) ASSERT_EQ(x, v);
    for (double x : imu.angular_velocity) ASSERT_EQ(x, v);
    ASSERT_GE(r->message.seq, last);
    last = r->message.seq;
  }
  writer.join();
  EXPECT_EQ(slot.latest()->message.seq, 50'000u);
}

}  // namespace
}  // namespace qsim

#include "qsim/middleware/nodes.hpp"

#include "qsim/dynamics/plant.hpp"
#include "qsim/dynamics/rotation.hpp"

namespace qsim {

namespace {

std::array<double, 4> to_array(const Quaternion& q) { return {q.w, q.x, q.y, q.z}; }
Quaternion to_quaternion(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }
std::array<double, 3> to_array(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
Vec3 to_vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

}  // namespace

PlantNode::PlantNode(Transport& transport, const QuadParams& params, RotationalModel model,
                     const VehicleState& initial)
    : transport_(transport),
      params_(params),
      model_(model),
      state_(initial),
      t0_(initial.t),
      commands_(transport.subscribe(TopicId::motor_commands)) {
  params_.validate();
}

void PlantNode::publish_state(std::int64_t stamp_ns) {
  const Quaternion q = euler_to_quaternion(state_.attitude);
  transport_.publish(TopicId::pose, PosePayload{to_array(state_.position), to_array(q)}, stamp_ns);
  transport_.publish(TopicId::velocity,
                     TwistPayload{to_array(state_.velocity), to_array(state_.body_rates)},
                     stamp_ns);
  transport_.publish(TopicId::imu, ImuPayload{to_array(q), to_array(state_.body_rates)},
                     stamp_ns);
}

MotorSpeeds PlantNode::current_command() const {
  const std::optional<Received> latest = commands_.latest();
  if (!latest) return {};
  return MotorSpeeds{std::get<MotorCommandPayload>(latest->message.payload).speeds};
}

void PlantNode::step(double dt) {
  state_ = plant_step(state_, current_command(), params_, dt, model_);
  ++steps_;
  // Re-derive time from the step count so long runs do not accumulate dt.
  state_.t = t0_ + static_cast<double>(steps_) * dt;
}

ControllerNode::ControllerNode(Transport& transport, const QuadParams& params,
                               ControllerConfig config)
    : transport_(transport),
      params_(params),
      config_(std::move(config)),
      allocator_(params),
      imu_(transport.subscribe(TopicId::imu)),
      pose_(transport.subscribe(TopicId::pose)),
      velocity_(transport.subscribe(TopicId::velocity)) {
  params_.validate();
  config_.validate();
}

SensorSnapshot ControllerNode::snapshot() const {
  SensorSnapshot snap;
  if (auto m = imu_.latest()) {
    const auto& p = std::get<ImuPayload>(m->message.payload);
    snap.imu = ImuSample{to_quaternion(p.orientation), to_vec(p.angular_velocity), m->received_ns};
  }
  if (auto m = pose_.latest()) {
    const auto& p = std::get<PosePayload>(m->message.payload);
    snap.pose = PoseSample{to_vec(p.position), to_quaternion(p.orientation), m->received_ns};
  }
  if (auto m = velocity_.latest()) {
    const auto& p = std::get<TwistPayload>(m->message.payload);
    snap.velocity = VelocitySample{to_vec(p.linear), m->received_ns};
  }
  return snap;
}

TickOutput ControllerNode::tick(const ControllerClock& clock) {
  const TickOutput out = control_loop_tick(snapshot(), clock, config_, params_, allocator_);
  last_seq_ = transport_.publish(TopicId::motor_commands, MotorCommandPayload{out.speeds.w},
                                 clock.now_ns)
                  .seq;
  return out;
}

void ControllerNode::set_schedule(std::vector<ScheduledSetpoint> schedule) {
  ControllerConfig next = config_;
  next.schedule = std::move(schedule);
  next.validate();
  config_ = std::move(next);
}

void ControllerNode::set_gains(const AltitudeGains& altitude, const AttitudeGains& attitude) {
  ControllerConfig next = config_;
  next.altitude = altitude;
  next.attitude = attitude;
  next.validate();
  config_ = std::move(next);
}

}  // namespace qsim

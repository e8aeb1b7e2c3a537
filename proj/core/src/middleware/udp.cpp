#include "qsim/middleware/udp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>

#include "qsim/middleware/codec.hpp"
#include "qsim/middleware/lockstep.hpp"
#include "qsim/middleware/nodes.hpp"

namespace qsim {

std::int64_t monotonic_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

namespace {

[[noreturn]] void transport_fault(const std::string& what) {
  throw Fault(FaultKind::transport, what + ": " + std::strerror(errno));
}

sockaddr_in make_address(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw Fault(FaultKind::configuration, "not an IPv4 address: " + host);
  }
  return addr;
}

void sleep_until_ns(std::int64_t t_ns) {
  std::this_thread::sleep_until(
      std::chrono::steady_clock::time_point(std::chrono::nanoseconds(t_ns)));
}

}  // namespace

UdpSocket::UdpSocket(const std::string& host, std::uint16_t port) {
  const sockaddr_in addr = make_address(host, port);
  fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (fd_ < 0) transport_fault("socket");
  if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    const int saved = errno;
    ::close(fd_);
    errno = saved;
    transport_fault("bind " + host + ":" + std::to_string(port));
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

UdpSocket::~UdpSocket() {
  if (fd_ >= 0) ::close(fd_);
}

void UdpSocket::send_to(const std::string& host, std::uint16_t port,
                        std::span<const std::uint8_t> bytes) {
  const sockaddr_in addr = make_address(host, port);
  const ssize_t n = ::sendto(fd_, bytes.data(), bytes.size(), 0,
                             reinterpret_cast<const sockaddr*>(&addr), sizeof(addr));
  // A missing peer shows up as ECONNREFUSED on loopback; datagrams are
  // allowed to vanish, so that is not an error.
  if (n < 0 && errno != ECONNREFUSED) transport_fault("sendto");
}

std::optional<std::vector<std::uint8_t>> UdpSocket::receive(int timeout_ms) {
  pollfd pfd{fd_, POLLIN, 0};
  const int ready = ::poll(&pfd, 1, timeout_ms);
  if (ready < 0) {
    if (errno == EINTR) return std::nullopt;
    transport_fault("poll");
  }
  if (ready == 0) return std::nullopt;
  std::vector<std::uint8_t> buf(2048);
  const ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
  if (n < 0) {
    if (errno == ECONNREFUSED || errno == EINTR || errno == EAGAIN) return std::nullopt;
    transport_fault("recv");
  }
  buf.resize(static_cast<std::size_t>(n));
  return buf;
}

UdpTransport::UdpTransport(const std::string& host, std::uint16_t port,
                           std::size_t datagram_budget)
    : socket_(host, port), peer_host_(host) {
  if (kMaxFrameSize > datagram_budget) {
    throw Fault(FaultKind::configuration,
                "largest frame (" + std::to_string(kMaxFrameSize) +
                    " bytes) exceeds the datagram budget of " + std::to_string(datagram_budget));
  }
}

UdpTransport::~UdpTransport() { stop(); }

void UdpTransport::set_peer(const std::string& host, std::uint16_t port) {
  make_address(host, port);
  peer_host_ = host;
  peer_port_ = port;
}

void UdpTransport::start() {
  if (running_.exchange(true)) return;
  receiver_ = std::thread([this] { receive_loop(); });
}

void UdpTransport::stop() {
  running_ = false;
  if (receiver_.joinable()) receiver_.join();
}

TopicMessage UdpTransport::publish(TopicId topic, const Payload& payload, std::int64_t stamp_ns) {
  const auto idx = static_cast<std::size_t>(topic);
  TopicMessage msg{topic, next_seq_.at(idx)++, stamp_ns, payload};
  const std::vector<std::uint8_t> frame = encode_frame(msg);
  if (peer_port_ != 0) socket_.send_to(peer_host_, peer_port_, frame);
  return msg;
}

Subscription UdpTransport::subscribe(TopicId topic) {
  if (running_) {
    throw Fault(FaultKind::configuration, "subscribe before starting the UDP transport");
  }
  auto& slot = slots_.at(static_cast<std::size_t>(topic));
  if (!slot) slot = std::make_shared<LatestSlot>();
  return Subscription(slot);
}

std::vector<FrameRecord> UdpTransport::receive_log() const {
  std::lock_guard lock(log_mu_);
  return log_;
}

void UdpTransport::receive_loop() {
  while (running_) {
    std::optional<std::vector<std::uint8_t>> datagram = socket_.receive(20);
    if (!datagram) continue;
    const std::int64_t recv_ns = monotonic_ns();
    TopicMessage msg;
    try {
      msg = decode_frame(*datagram);
    } catch (const DecodeError&) {
      ++decode_errors_;
      continue;
    }
    {
      std::lock_guard lock(log_mu_);
      log_.push_back({msg.topic, msg.seq, msg.stamp_ns, recv_ns});
    }
    if (const auto& slot = slots_[static_cast<std::size_t>(msg.topic)]) slot->offer(msg, recv_ns);
  }
}

Trace udp_run(const QuadParams& params, RotationalModel model, const ControllerConfig& config,
              const UdpRunOptions& options) {
  rate_ratio(options.plant_rate_hz, options.controller_rate_hz);
  const std::string& host = options.endpoints.host;

  UdpTransport plant_link(host, options.endpoints.plant_port);
  UdpTransport controller_link(host, options.endpoints.controller_port);
  plant_link.set_peer(host, controller_link.local_port());
  controller_link.set_peer(host, plant_link.local_port());

  PlantNode plant(plant_link, params, model);
  ControllerNode controller(controller_link, params, config);
  plant_link.start();
  controller_link.start();

  const double dt = 1.0 / options.plant_rate_hz;
  const std::int64_t plant_period = std::llround(1e9 / options.plant_rate_hz);
  const std::int64_t controller_period = std::llround(1e9 / options.controller_rate_hz);
  const auto plant_steps = std::llround(options.duration_s * options.plant_rate_hz);
  const auto controller_ticks = std::llround(options.duration_s * options.controller_rate_hz);
  const std::int64_t stop_ns = options.plant_stop_at_s
                                   ? std::llround(*options.plant_stop_at_s * 1e9)
                                   : std::numeric_limits<std::int64_t>::max();

  // Same ordering as lockstep, spread over one plant period: publish on the
  // grid, controller ticks a quarter period later, plant steps at half period
  // with whatever command has arrived by then.
  const std::int64_t tick_phase = plant_period / 4;
  const std::int64_t step_phase = plant_period / 2;

  Trace trace;
  const std::int64_t start = monotonic_ns() + 5'000'000;

  std::thread plant_thread([&] {
    if (!options.start_plant) return;
    for (long long k = 0; k <= plant_steps; ++k) {
      const std::int64_t mission = k * plant_period;
      if (mission >= stop_ns) return;
      sleep_until_ns(start + mission);
      plant.publish_state(monotonic_ns());
      if (k == plant_steps) {
        trace.samples.push_back({plant.state(), plant.current_command()});
        return;
      }
      sleep_until_ns(start + mission + step_phase);
      trace.samples.push_back({plant.state(), plant.current_command()});
      try {
        plant.step(dt);
      } catch (const Fault& f) {
        trace.fault = FaultRecord{f.kind(), plant.state().t, f.what()};
        return;
      }
      ++trace.plant_steps;
    }
  });

  std::vector<CommandRecord> commands;
  commands.reserve(static_cast<std::size_t>(controller_ticks));
  for (long long j = 0; j < controller_ticks; ++j) {
    sleep_until_ns(start + j * controller_period + tick_phase);
    const std::int64_t now = monotonic_ns();
    const std::int64_t mission = now - start - tick_phase;
    const TickOutput out = controller.tick({now, mission});
    commands.push_back({mission, controller.last_seq(), out.speeds, out.path});
  }
  plant_thread.join();

  // Let the last command datagram land before tearing the links down.
  std::this_thread::sleep_for(std::chrono::milliseconds(5));
  plant_link.stop();
  controller_link.stop();

  trace.commands = std::move(commands);
  trace.controller_ticks = trace.commands.size();
  trace.plant_rx = plant_link.receive_log();
  trace.controller_rx = controller_link.receive_log();
  return trace;
}

}  // namespace qsim

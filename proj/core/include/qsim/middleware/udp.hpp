#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "qsim/control/controller.hpp"
#include "qsim/middleware/bus.hpp"
#include "qsim/middleware/trace.hpp"

namespace qsim {

inline constexpr std::size_t kDatagramBudget = 1200;

/// Monotonic clock in ns, the time base of UDP mode.
std::int64_t monotonic_ns();

/// RAII IPv4 UDP socket.
class UdpSocket {
 public:
  UdpSocket(const std::string& host, std::uint16_t port);
  ~UdpSocket();
  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;

  std::uint16_t local_port() const noexcept { return port_; }
  void send_to(const std::string& host, std::uint16_t port, std::span<const std::uint8_t> bytes);
  /// Waits up to timeout_ms; returns nullopt on timeout.
  std::optional<std::vector<std::uint8_t>> receive(int timeout_ms);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

/// Transport over one UDP socket: publishes to a single peer endpoint and
/// feeds keep-last-1 slots from a background receive thread.
class UdpTransport final : public Transport {
 public:
  UdpTransport(const std::string& host, std::uint16_t port,
               std::size_t datagram_budget = kDatagramBudget);
  ~UdpTransport() override;

  std::uint16_t local_port() const noexcept { return socket_.local_port(); }
  void set_peer(const std::string& host, std::uint16_t port);

  void start();
  void stop();

  TopicMessage publish(TopicId topic, const Payload& payload, std::int64_t stamp_ns) override;
  Subscription subscribe(TopicId topic) override;

  std::vector<FrameRecord> receive_log() const;
  std::uint64_t decode_errors() const noexcept { return decode_errors_.load(); }

 private:
  void receive_loop();

  UdpSocket socket_;
  std::string peer_host_;
  std::uint16_t peer_port_ = 0;
  std::array<std::uint64_t, 5> next_seq_{};
  std::array<std::shared_ptr<LatestSlot>, 5> slots_{};
  std::atomic<bool> running_{false};
  std::atomic<std::uint64_t> decode_errors_{0};
  std::thread receiver_;
  mutable std::mutex log_mu_;
  std::vector<FrameRecord> log_;
};

struct UdpEndpoints {
  std::string host = "127.0.0.1";
  std::uint16_t plant_port = 0;       // 0 picks an ephemeral port
  std::uint16_t controller_port = 0;
};

struct UdpRunOptions {
  double plant_rate_hz = 100.0;
  double controller_rate_hz = 50.0;
  double duration_s = 15.0;
  UdpEndpoints endpoints;
  bool start_plant = true;
  /// The plant thread exits (stops stepping and publishing) at this time.
  std::optional<double> plant_stop_at_s;
};

/// Runs the plant and controller as independent wall-clock nodes exchanging
/// datagrams over loopback.  Samples come from the plant side, commands from
/// the controller side with mission-time stamps.
Trace udp_run(const QuadParams& params, RotationalModel model, const ControllerConfig& config,
              const UdpRunOptions& options);

}  // namespace qsim

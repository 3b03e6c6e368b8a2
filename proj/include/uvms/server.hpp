#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "uvms/input_log.hpp"
#include "uvms/session_config.hpp"

namespace uvms {

struct ServerOptions {
  std::string address = "0.0.0.0";
  std::ostream* telemetry = nullptr;
  InputLogWriter* recorder = nullptr;
  std::optional<std::uint64_t> max_ticks;  // stop after this many ticks
  std::size_t queue_capacity = 4096;       // inbound messages buffered between ticks
};

/// WebSocket front end. Network I/O runs on its own thread; run() owns the
/// session and ticks it in real time on the calling thread.
class Server {
 public:
  Server(SessionConfig config, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and listens; returns the bound port (useful with port 0).
  std::uint16_t listen();
  /// Blocks until stop() or max_ticks. Calls listen() if needed.
  void run();
  /// Safe from any thread, including signal-driven ones.
  void stop();

  std::uint64_t overflowed_messages() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace uvms

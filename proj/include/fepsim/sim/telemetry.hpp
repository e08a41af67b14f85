#pragma once

// State frames for the cockpit display and the WebSocket server that carries
// them. The same port serves the display's static files.

#include "fepsim/sim/simulator.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace fepsim::sim {

/// Picks the first step at or after each multiple of 1/rate.
class Decimator {
 public:
  explicit Decimator(double rate_hz);
  bool due(double t);
  double rate_hz() const { return rate_hz_; }

 private:
  double rate_hz_;
  std::int64_t next_ = 0;
};

/// JSON text frame for the current simulator state; `events` are appended.
std::string state_frame(const Simulator& sim, const std::vector<LogEvent>& events = {});
std::string error_frame(const std::string& message);

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8080;  // 0 picks a free port
  std::filesystem::path static_root;
  std::size_t client_queue = 64;  // frames held per slow client before dropping
};

/// Called on the network thread for every inbound text frame. A returned
/// string is sent back to that client only.
using FrameHandler = std::function<std::optional<std::string>(const std::string&)>;

/// WebSocket broadcast plus static file serving on one port, run on its own
/// thread.
class TelemetryServer {
 public:
  TelemetryServer(ServerOptions options, FrameHandler handler);
  ~TelemetryServer();
  TelemetryServer(const TelemetryServer&) = delete;
  TelemetryServer& operator=(const TelemetryServer&) = delete;

  /// Thread-safe. Queued for every connected client.
  void broadcast(std::string frame);

  std::uint16_t port() const;
  std::size_t clients() const;
  std::uint64_t dropped_frames() const;

  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Content type by file extension.
std::string mime_type(const std::filesystem::path& path);

/// Resolves a request target under `root`. Empty when it escapes the root
/// or does not name a regular file; "/" maps to index.html.
std::optional<std::filesystem::path> resolve_static(const std::filesystem::path& root,
                                                    const std::string& target);

}  // namespace fepsim::sim

#pragma once

// Live session: commands arrive from other threads through a bounded queue
// and are applied at the next step boundary; state frames go out decimated.
// Applied commands are captured with their step so the run can be replayed.

#include "fepsim/sim/simulator.hpp"

#include <atomic>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <string>

namespace fepsim::sim {

struct LiveOptions {
  double telemetry_hz = 30.0;
  double realtime_factor = 1.0;  // 0 steps as fast as possible
  std::size_t queue_limit = 256;
};

struct LiveResult {
  TrajectoryLog log;
  std::vector<StampedCommand> capture;
  std::uint64_t frames = 0;
  std::uint64_t rejected = 0;  // commands refused while halted
};

class LiveSession {
 public:
  using FrameSink = std::function<void(std::string)>;
  using StepHook = std::function<void(std::int64_t step)>;

  /// Trims at the initial condition; throws TrimError.
  LiveSession(LoadedScenario loaded, LiveOptions options);

  /// Thread-safe. Queues a command frame; returns an error frame when the
  /// frame is malformed, the queue is full or the run is halted and the
  /// frame is not a reset.
  std::optional<std::string> submit(const std::string& frame);

  /// Receives state and error frames on the simulation thread.
  void set_sink(FrameSink sink) { sink_ = std::move(sink); }
  /// Runs on the simulation thread before commands are drained for a step.
  void set_step_hook(StepHook hook) { hook_ = std::move(hook); }

  Simulator& simulator() { return sim_; }

  /// Steps until the scenario duration elapses or `stop` is set.
  LiveResult run(const std::atomic<bool>& stop);

 private:
  Simulator sim_;
  LiveOptions options_;
  FrameSink sink_;
  StepHook hook_;
  std::mutex mutex_;
  std::deque<Command> queue_;
  std::atomic<bool> halted_{false};
};

}  // namespace fepsim::sim

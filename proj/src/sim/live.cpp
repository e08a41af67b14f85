#include "fepsim/sim/live.hpp"

#include "fepsim/sim/telemetry.hpp"

#include <chrono>
#include <sstream>
#include <thread>

namespace fepsim::sim {

LiveSession::LiveSession(LoadedScenario loaded, LiveOptions options)
    : sim_(std::move(loaded)), options_(options) {
  if (!(options_.realtime_factor >= 0.0)) {
    throw std::invalid_argument("realtime factor must be non-negative");
  }
  if (options_.queue_limit == 0) {
    throw std::invalid_argument("command queue limit must be positive");
  }
}

std::optional<std::string> LiveSession::submit(const std::string& frame) {
  auto parsed = parse_command_frame(frame);
  if (auto* error = std::get_if<std::string>(&parsed)) return error_frame(*error);
  auto& command = std::get<Command>(parsed);
  if (halted_ && !std::holds_alternative<ResetCommand>(command)) {
    return error_frame("simulation halted: send reset");
  }
  std::lock_guard lock(mutex_);
  if (queue_.size() >= options_.queue_limit) return error_frame("command queue full");
  queue_.push_back(std::move(command));
  return std::nullopt;
}

LiveResult LiveSession::run(const std::atomic<bool>& stop) {
  using clock = std::chrono::steady_clock;
  const auto steps = static_cast<std::int64_t>(sim_.loaded().scenario.steps());
  LiveResult result;
  result.log.scenario = sim_.loaded().scenario.name;
  result.log.dt = sim_.dt();
  Decimator decimator(options_.telemetry_hz);
  const auto start = clock::now();
  const auto emit = [&](std::string frame) {
    if (sink_) sink_(std::move(frame));
  };

  std::deque<Command> pending;
  while (!stop && sim_.step_index() < steps) {
    if (hook_) hook_(sim_.step_index());
    {
      std::lock_guard lock(mutex_);
      pending.swap(queue_);
    }
    for (auto& command : pending) {
      auto* reset = std::get_if<ResetCommand>(&command);
      if (halted_ && reset == nullptr) {
        ++result.rejected;
        continue;
      }
      if (reset != nullptr) reset->resume = halted_;
      sim_.apply(command);
      if (reset != nullptr) halted_ = false;
    }
    pending.clear();
    if (halted_) {
      std::this_thread::sleep_for(std::chrono::milliseconds(1));
      continue;
    }

    std::string failure;
    try {
      result.log.records.push_back(sim_.step());
    } catch (const dynamics::SingularityError& e) {
      failure = e.what();
    } catch (const RangeError& e) {
      failure = e.what();
    }
    if (!failure.empty()) {
      std::ostringstream os;
      os << "t=" << sim_.time() << " s: " << failure;
      sim_.note("halted: " + os.str());
      halted_ = true;
      emit(error_frame("simulation halted at " + os.str() + "; send reset"));
      continue;
    }

    const LogRecord& record = result.log.records.back();
    if (decimator.due(record.t)) {
      emit(state_frame(sim_, sim_.take_new_events()));
      ++result.frames;
    }
    if (options_.realtime_factor > 0.0) {
      const auto target =
          start + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(
                      sim_.time() / options_.realtime_factor));
      std::this_thread::sleep_until(target);
    }
  }
  if (halted_) {
    std::ostringstream os;
    os << "t=" << sim_.time() << " s: halted without reset";
    result.log.error = os.str();
  }
  result.log.events = sim_.events();
  result.capture = sim_.capture();
  return result;
}

}  // namespace fepsim::sim

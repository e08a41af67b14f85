#pragma once

// Fixed-step pilot-in-the-loop simulation. One step:
//   stick emulator drains its link, moves the stick, publishes status;
//   host reads stick positions, gears them to pilot rates;
//   envelope protection, INDI, integration;
//   soft-stop cues go back to the stick.
// Inputs arrive as stamped commands so scripted, live and replayed runs all
// take the same path.

#include "fepsim/acs/device.hpp"
#include "fepsim/acs/transmit.hpp"
#include "fepsim/acs/transport.hpp"
#include "fepsim/control/indi.hpp"
#include "fepsim/protection/envelope.hpp"
#include "fepsim/sim/commands.hpp"
#include "fepsim/sim/config.hpp"
#include "fepsim/sim/log.hpp"
#include "fepsim/sim/model.hpp"

#include <array>
#include <functional>
#include <memory>
#include <span>

namespace fepsim::sim {

/// Everything a scenario refers to, loaded.
struct LoadedScenario {
  Scenario scenario;
  AircraftConfig aircraft;
  aero::AeroTables aero;
  protection::EnvelopeDatabase envelope;
};

LoadedScenario load_all(const std::filesystem::path& scenario_path);
LoadedScenario load_all(Scenario scenario);

enum class LinkDirection { ToDevice, ToHost };

class Simulator {
 public:
  /// Trims at the initial condition; throws TrimError.
  explicit Simulator(LoadedScenario loaded);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Applies a command before the next step and records it in the capture.
  void apply(const Command& command);

  /// Advances one step and returns its record. Throws SingularityError or
  /// RangeError when the state leaves the model's domain.
  const LogRecord& step();

  std::int64_t step_index() const { return step_; }
  double time() const { return static_cast<double>(step_) * dt_; }
  double dt() const { return dt_; }

  const AircraftState& state() const { return state_; }
  const TrimResult& trim() const { return trim_; }
  const LogRecord& last_record() const { return last_; }
  const protection::ProtectionResult& last_protection() const { return last_protection_; }
  const acs::AcsDevice& device() const { return device_; }
  const LoadedScenario& loaded() const { return loaded_; }
  const AircraftModel& model() const { return model_; }
  bool protection_on() const { return protection_on_; }

  const std::vector<StampedCommand>& capture() const { return capture_; }
  const std::vector<LogEvent>& events() const { return events_; }
  /// Events recorded since the last call.
  std::vector<LogEvent> take_new_events();

  /// Adds an event at the current step.
  void note(std::string text) { event(std::move(text)); }

  /// Observes every datagram on the stick link.
  void set_link_tap(std::function<void(LinkDirection, std::span<const std::uint8_t>)> tap) {
    tap_ = std::move(tap);
  }

 private:
  void initialize();
  void event(std::string text);
  void send_to_device(const acs::AcsMessage& message);
  void send_to_host(const acs::AcsMessage& message);
  void device_side(std::int64_t now_us);
  void host_side();
  void cue_softstops(const protection::ProtectionResult& result, double q_pilot,
                     std::int64_t now_us);

  LoadedScenario loaded_;
  AircraftModel model_;
  double dt_;
  TrimResult trim_;
  AircraftState state_;
  control::IndiController indi_;
  acs::AcsDevice device_;
  std::unique_ptr<acs::LoopbackLink> link_;
  acs::TransmitPolicy host_policy_;
  acs::TransmitPolicy device_policy_;
  std::unique_ptr<acs::StatusSchedule> status_schedule_;

  GripCommand input_;
  bool protection_on_ = true;
  std::array<double, acs::kStickAxes> stick_deg_{};
  std::array<double, acs::kStickAxes> softstop_{};
  protection::ProtectionResult last_protection_;
  protection::ProtectionState previous_layers_;

  std::int64_t step_ = 0;
  LogRecord last_;
  std::vector<StampedCommand> capture_;
  std::vector<LogEvent> events_;
  std::size_t events_taken_ = 0;
  std::function<void(LinkDirection, std::span<const std::uint8_t>)> tap_;
};

/// Profile knots as stamped input commands. A knot takes effect at the
/// first step whose time is at or after the knot time.
std::vector<StampedCommand> profile_commands(const Scenario& scenario);

/// Runs the stamped commands for the scenario duration. A simulation error
/// halts the run; a resuming reset stamped at the halted step continues it,
/// otherwise the partial log is returned with `error` set. A resuming reset
/// whose step succeeds is also an error.
TrajectoryLog run_commands(LoadedScenario loaded, const std::vector<StampedCommand>& commands);

/// Scripted run of the scenario profile.
TrajectoryLog run_scenario(LoadedScenario loaded);

/// Same scenario with protection forced on or off.
LoadedScenario with_protection(LoadedScenario loaded, bool on);

}  // namespace fepsim::sim

#pragma once

// Inbound commands of a live run. The same records are written to capture
// files (one JSON object per line, tagged with the step they were applied at)
// so a live session can be replayed exactly.

#include "fepsim/acs/messages.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fepsim::sim {

struct GripCommand {
  double pitch = 0.0;  // lbf
  double roll = 0.0;   // lbf
  double pedal = 0.0;  // [-1, 1]
  std::optional<double> throttle;
  bool operator==(const GripCommand&) const = default;
};

struct ProtectionToggle {
  bool on = true;
  bool operator==(const ProtectionToggle&) const = default;
};

struct ModeCommand {
  acs::ModeRequest request = acs::ModeRequest::None;
  acs::AxisSelect axis = acs::AxisSelect::Both;
  bool operator==(const ModeCommand&) const = default;
};

/// `resume` marks a reset that answered a halted step; replay applies it
/// only after that step fails again.
struct ResetCommand {
  bool resume = false;
  bool operator==(const ResetCommand&) const = default;
};

using Command = std::variant<GripCommand, ProtectionToggle, ModeCommand, ResetCommand>;

struct StampedCommand {
  std::int64_t step = 0;
  Command command;
  bool operator==(const StampedCommand&) const = default;
};

inline constexpr double kGripForceLimit = 27.0;

/// Parses an inbound WebSocket text frame. Returns the error text on failure.
/// Grip forces are clamped to the 27 lbf stick limit.
std::variant<Command, std::string> parse_command_frame(const std::string& text);

std::string to_json(const Command& command);

std::string to_capture_line(const StampedCommand& command);
StampedCommand parse_capture_line(const std::string& line);

void write_capture(const std::vector<StampedCommand>& commands, const std::filesystem::path& path);
std::vector<StampedCommand> read_capture(const std::filesystem::path& path);

}  // namespace fepsim::sim

#pragma once

// Two-axis sidestick emulator. Owns the feel state of both axes and applies
// protocol messages to it.

#include "fepsim/acs/ffc.hpp"
#include "fepsim/acs/messages.hpp"
#include "fepsim/acs/stick.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fepsim::acs {

enum StickAxis : std::size_t { kPitch = 0, kRoll = 1 };
inline constexpr std::size_t kStickAxes = 2;

struct AxisConfig {
  FfcCurve ffc;
  double inertia = 0.6;
  double zeta = 0.35;
  double trim = 0.0;
  Friction friction;
};

struct Endpoint {
  std::array<std::uint8_t, 4> address = {127, 0, 0, 1};
  std::uint16_t port = 0;
  bool operator==(const Endpoint&) const = default;
  std::string to_string() const;
};

struct AcsConfig {
  std::array<AxisConfig, kStickAxes> axes;
  double status_rate_hz = 200.0;
  Endpoint endpoint;
};

struct GripSwitches {
  bool s1 = false;  // left
  bool s2 = false;  // right
  bool s3 = false;  // trim
  bool s4 = false;  // trigger

  std::uint8_t mask() const {
    return static_cast<std::uint8_t>(s1 | (s2 << 1) | (s3 << 2) | (s4 << 3));
  }
  static GripSwitches from_mask(std::uint8_t m) {
    return {(m & 1) != 0, (m & 2) != 0, (m & 4) != 0, (m & 8) != 0};
  }
  bool operator==(const GripSwitches&) const = default;
};

/// Parameter ranges the motors can realize.
struct DeviceLimits {
  double fade_time_max = 10.0;    // s
  double shaker_amplitude_max = 10.0;  // lbf
  double shaker_frequency_max = 50.0;  // Hz
  double multiplier_max = 10.0;
  double softstop_max = 23.0;     // deg
};

/// Result of a mode request.
enum class Transition { Accepted, Unchanged, Rejected };

/// Mode machine. Leaving Disabled for Enabled needs the zeroing step;
/// Jammed is reachable only from Enabled; Disabled from anywhere.
Transition mode_transition(Mode from, ModeRequest request, bool zeroed);

class AcsDevice {
 public:
  explicit AcsDevice(AcsConfig config = {});

  /// Initial built-in test: zeroes the force sensors. Required before the
  /// first Enable.
  void complete_ibit() { zeroed_ = true; }
  bool zeroed() const { return zeroed_; }

  /// Applies one message; returns the replies (ID22). Rejections and
  /// malformed content leave the state untouched.
  std::vector<AcsMessage> apply(const AcsMessage& message);

  /// Decodes and applies a datagram. Undecodable input yields one ID22
  /// with status Malformed.
  std::vector<AcsMessage> receive(std::span<const std::uint8_t> datagram);

  /// Advances both axes by dt under the given grip forces.
  void step(const std::array<double, kStickAxes>& grip_force, double dt);

  RotaryStatus status(StickAxis axis) const;

  const StickAxisState& axis(StickAxis a) const { return axes_[a].state; }
  StickAxisState& axis_state(StickAxis a) { return axes_[a].state; }

  /// Curve currently felt, including any fade in progress.
  FfcCurve effective_curve(StickAxis a) const;
  const FfcCurve& base_curve(StickAxis a) const { return axes_[a].base; }
  bool fading(StickAxis a) const { return axes_[a].fade_from.has_value(); }

  double characteristic_force(StickAxis a) const;
  double grip_force(StickAxis a) const { return axes_[a].grip; }

  double fade_time() const { return fade_time_; }
  void set_switches(GripSwitches s) { switches_ = s; }
  GripSwitches switches() const { return switches_; }

  const Endpoint& endpoint() const { return endpoint_; }
  /// Address requested by ID50, effective at the next bind.
  const std::optional<Endpoint>& pending_endpoint() const { return pending_endpoint_; }
  /// Makes the pending address current; returns true if one was pending.
  bool rebind();

  const AcsConfig& config() const { return config_; }
  const DeviceLimits& limits() const { return limits_; }

 private:
  struct Axis {
    StickAxisState state;
    FfcCurve base;
    FfcCurve target;
    std::optional<FfcCurve> fade_from;
    double fade_elapsed = 0.0;
    double fade_duration = 0.0;
    double grip = 0.0;
  };

  std::vector<std::size_t> selected(AxisSelect select) const;
  void install(std::size_t index, FfcCurve curve);

  AcsConfig config_;
  DeviceLimits limits_;
  std::array<Axis, kStickAxes> axes_;
  double fade_time_ = 0.0;
  bool zeroed_ = false;
  GripSwitches switches_;
  Endpoint endpoint_;
  std::optional<Endpoint> pending_endpoint_;
};

}  // namespace fepsim::acs

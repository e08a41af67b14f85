#pragma once

#include "fepsim/acs/device.hpp"
#include "fepsim/aero/aero_model.hpp"
#include "fepsim/control/indi.hpp"
#include "fepsim/dynamics/integrator.hpp"
#include "fepsim/protection/envelope.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fepsim::sim {

/// Stick deflection to pilot rate command. Full deflection (24 deg) gives the
/// listed rate; pedal in [-1, 1] gives yaw rate.
struct Gearing {
  double pitch_up = 0.5;    // rad/s at full aft stick
  double pitch_down = 0.3;  // rad/s at full forward stick
  double roll = 1.5;        // rad/s at full lateral stick
  double yaw = 0.3;         // rad/s at full pedal
};

/// Soft stop pushed to the stick while a protection layer is active.
struct SoftStopConfig {
  bool enabled = true;
  double position = 12.0;  // deg from centre, toward the protected side
  double multiplier = 3.0;
  double fade_time = 0.2;  // s
};

struct InceptorConfig {
  acs::AcsConfig device;
  Gearing gearing;
  SoftStopConfig softstop;
};

struct AircraftConfig {
  int version = 1;
  std::string name;
  double mass = 637.16;  // slug
  Matrix3d inertia = Matrix3d::Zero();
  double gravity = kGravity;
  aero::Geometry geometry;
  dynamics::IntegratorConfig integrator;
  double thrust_max = 25000.0;  // lbf
  control::IndiConfig indi;
  protection::ProtectionGains protection;
  InceptorConfig inceptor;

  dynamics::MassProperties mass_properties() const {
    return dynamics::MassProperties(mass, inertia, gravity);
  }
};

AircraftConfig parse_aircraft_config(const std::string& text);
AircraftConfig load_aircraft_config(const std::filesystem::path& path);

enum class InputKind { Grip, Rates };

/// One profile knot, held until the next one.
struct ProfileSample {
  double t = 0.0;
  double pitch = 0.0;  // lbf (grip) or q rad/s (rates)
  double roll = 0.0;   // lbf (grip) or p rad/s (rates)
  double yaw = 0.0;    // pedal [-1, 1] (grip) or r rad/s (rates)
  std::optional<double> throttle;  // [0, 1]; absent holds trim thrust
};

struct InitialCondition {
  double altitude = 15000.0;  // ft
  double airspeed = 500.0;    // ft/s
  double gamma = 0.0;         // deg, flight-path angle
  double bank = 0.0;          // deg
};

enum class InputSource { Scripted, Live };

struct Scenario {
  int version = 1;
  std::string name;
  std::filesystem::path path;  // file the scenario was read from
  std::filesystem::path aircraft;
  std::filesystem::path aero;
  std::filesystem::path envelope;
  InitialCondition initial;
  double dt = 0.001;
  double duration = 10.0;
  bool protection = true;
  InputSource source = InputSource::Scripted;
  InputKind input = InputKind::Grip;
  std::vector<ProfileSample> profile;

  /// Empty when valid, otherwise the first violated invariant.
  std::string check() const;
  std::size_t steps() const;
};

/// Referenced paths are resolved against the scenario file's directory.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Zero-order hold lookup; before the first knot the first knot applies.
ProfileSample sample_profile(const std::vector<ProfileSample>& profile, double t);

std::string read_text_file(const std::filesystem::path& path);

/// Validates any supported config file by its "format" field. Returns a
/// short description of what was checked; throws ConfigError otherwise.
std::string validate_config_file(const std::filesystem::path& path);

}  // namespace fepsim::sim

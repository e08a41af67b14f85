#pragma once

// Per-axis force-feel dynamics of the sidestick:
//
//   m theta'' + c theta' = F_char + F_friction + F_grip + F_shaker
//   c = 2 zeta sqrt(m k)
//
// theta in deg, forces in lbf, k in lbf/deg.

#include "fepsim/acs/ffc.hpp"

#include <cstdint>

namespace fepsim::acs {

enum class Mode : std::uint8_t { Disabled = 0, Enabled = 1, Jammed = 2 };

const char* to_string(Mode mode);

/// Limits of the commandable feel parameters.
inline constexpr double kZetaMin = 0.2;
inline constexpr double kZetaMax = 6.0;
inline constexpr double kInertiaMin = 0.01;
inline constexpr double kInertiaMax = 10.0;

/// Commanded inertia value to equation mass. Single place the device unit is
/// converted.
inline constexpr double kInertiaScale = 1.0;

struct Shaker {
  double amplitude = 0.0;  // lbf
  double frequency = 0.0;  // Hz
};

/// Coulomb plus viscous friction, off by default.
struct Friction {
  double coulomb = 0.0;  // lbf
  double viscous = 0.0;  // lbf s/deg

  double force(double theta_dot) const {
    const double s = theta_dot > 0.0 ? 1.0 : (theta_dot < 0.0 ? -1.0 : 0.0);
    return -coulomb * s - viscous * theta_dot;
  }
};

struct StickAxisState {
  double theta = 0.0;      // deg
  double theta_dot = 0.0;  // deg/s
  Mode mode = Mode::Disabled;
  double inertia = 0.6;    // commanded device value
  double zeta = 0.35;
  double trim = 0.0;       // deg
  Shaker shaker;
  double shaker_phase = 0.0;  // rad
  bool trim_enabled = true;
  bool shaker_enabled = false;
  bool damping_enabled = true;
  Friction friction;

  double mass() const { return inertia * kInertiaScale; }
  bool operator==(const StickAxisState&) const = default;
};

/// Characteristic force, restoring about the trim position.
double characteristic_force(const StickAxisState& axis, const FfcCurve& curve);

/// One fixed step (RK4). Jammed holds theta, Disabled drops F_char, the
/// position is hard-clamped at +/-24 deg.
StickAxisState stick_dynamics_step(const StickAxisState& axis, double grip_force,
                                   const FfcCurve& curve, double dt);

/// Unit step response of x'' + 2 zeta wn x' + wn^2 x = wn^2 u from rest.
/// All three damping branches.
double unit_step_response(double t, double zeta, double omega_n);

/// Response of the stick equation to a grip step F from rest at zero,
/// constant gradient k.
double analytic_step_response(double t, double m, double zeta, double k, double force);

/// Free response released from rest at unit deflection.
inline double unit_free_response(double t, double zeta, double omega_n) {
  return 1.0 - unit_step_response(t, zeta, omega_n);
}

}  // namespace fepsim::acs

#pragma once

#include "fepsim/dynamics/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace fepsim::dynamics {

/// First-order actuator with rate and position saturation. Degrees and deg/s.
struct ActuatorSpec {
  double tau = 0.0495;
  double rate_limit = 60.0;
  double pos_min = -25.0;
  double pos_max = 25.0;

  double clamp(double position) const { return std::clamp(position, pos_min, pos_max); }
  bool valid() const { return tau > 0.0 && rate_limit > 0.0 && pos_min < pos_max; }
};

/// Control surface ordering used throughout: horizontal tail, aileron, rudder.
enum class Surface : int { Tail = 0, Aileron = 1, Rudder = 2 };
inline constexpr int kSurfaceCount = 3;

using ActuatorSet = std::array<ActuatorSpec, kSurfaceCount>;

/// Surface limits of the F-16 class model: tail, aileron, rudder.
inline ActuatorSet default_actuators() {
  return {ActuatorSpec{0.0495, 60.0, -25.0, 25.0},
          ActuatorSpec{0.0495, 80.0, -21.5, 21.5},
          ActuatorSpec{0.0495, 120.0, -30.0, 30.0}};
}

/// One forward step of  delta_dot = (clamp(cmd) - delta) / tau  with the rate
/// clamped to +/-rate_limit and the result clamped to the position band.
template <typename Scalar>
Scalar actuator_step(Scalar current, Scalar command, const ActuatorSpec& spec, Scalar dt) {
  using std::abs;
  using std::clamp;
  const Scalar target = clamp(command, Scalar(spec.pos_min), Scalar(spec.pos_max));
  const Scalar error = target - current;
  Scalar rate = clamp(error / Scalar(spec.tau), Scalar(-spec.rate_limit), Scalar(spec.rate_limit));
  Scalar step = rate * dt;
  // forward integration must not carry the surface past its target
  if (abs(step) > abs(error)) {
    step = error;
  }
  return clamp(current + step, Scalar(spec.pos_min), Scalar(spec.pos_max));
}

}  // namespace fepsim::dynamics

#include "fepsim/acs/stick.hpp"

#include <algorithm>
#include <cmath>

namespace fepsim::acs {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Disabled:
      return "disabled";
    case Mode::Enabled:
      return "enabled";
    case Mode::Jammed:
      return "jammed";
  }
  return "?";
}

double characteristic_force(const StickAxisState& axis, const FfcCurve& curve) {
  if (axis.mode == Mode::Disabled) {
    return 0.0;
  }
  const double trim = axis.trim_enabled ? axis.trim : 0.0;
  return -curve.force(axis.theta - trim);
}

StickAxisState stick_dynamics_step(const StickAxisState& axis, double grip_force,
                                   const FfcCurve& curve, double dt) {
  StickAxisState next = axis;
  if (axis.mode == Mode::Jammed) {
    next.theta_dot = 0.0;
    return next;
  }

  const double m = axis.mass();
  const double trim = axis.trim_enabled ? axis.trim : 0.0;
  const bool passive = axis.mode == Mode::Disabled;

  // gradient of the segment being entered, frozen over the step
  double direction = axis.theta_dot;
  if (direction == 0.0) {
    direction = grip_force - curve.force(axis.theta - trim);
  }
  const double k = curve.gradient(axis.theta - trim, direction >= 0.0 ? 1.0 : -1.0);
  const double c = axis.damping_enabled ? 2.0 * axis.zeta * std::sqrt(m * std::max(k, 0.0)) : 0.0;

  const bool shaking = axis.shaker_enabled && axis.shaker.amplitude > 0.0;
  const double w_shake = 2.0 * kPi * axis.shaker.frequency;

  auto accel = [&](double theta, double theta_dot, double tau) {
    double f = grip_force + axis.friction.force(theta_dot) - c * theta_dot;
    if (!passive) {
      f -= curve.force(theta - trim);
    }
    if (shaking) {
      f += axis.shaker.amplitude * std::sin(axis.shaker_phase + w_shake * tau);
    }
    return f / m;
  };

  const double x0 = axis.theta;
  const double v0 = axis.theta_dot;
  const double h = 0.5 * dt;
  const double k1x = v0;
  const double k1v = accel(x0, v0, 0.0);
  const double k2x = v0 + h * k1v;
  const double k2v = accel(x0 + h * k1x, k2x, h);
  const double k3x = v0 + h * k2v;
  const double k3v = accel(x0 + h * k2x, k3x, h);
  const double k4x = v0 + dt * k3v;
  const double k4v = accel(x0 + dt * k3x, k4x, dt);
  next.theta = x0 + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  next.theta_dot = v0 + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

  if (shaking) {
    next.shaker_phase = std::fmod(axis.shaker_phase + w_shake * dt, 2.0 * kPi);
  }

  if (next.theta > kPositionLimit) {
    next.theta = kPositionLimit;
    next.theta_dot = std::min(next.theta_dot, 0.0);
  } else if (next.theta < -kPositionLimit) {
    next.theta = -kPositionLimit;
    next.theta_dot = std::max(next.theta_dot, 0.0);
  }
  return next;
}

double unit_step_response(double t, double zeta, double omega_n) {
  if (t <= 0.0) {
    return 0.0;
  }
  const double wt = omega_n * t;
  if (std::abs(zeta - 1.0) < 1e-9) {
    return 1.0 - std::exp(-wt) * (1.0 + wt);
  }
  if (zeta < 1.0) {
    const double root = std::sqrt(1.0 - zeta * zeta);
    const double wd = omega_n * root;
    return 1.0 - std::exp(-zeta * wt) * (std::cos(wd * t) + zeta / root * std::sin(wd * t));
  }
  const double root = std::sqrt(zeta * zeta - 1.0);
  const double r1 = -omega_n * (zeta - root);
  const double r2 = -omega_n * (zeta + root);
  return 1.0 + (r2 * std::exp(r1 * t) - r1 * std::exp(r2 * t)) / (r1 - r2);
}

double analytic_step_response(double t, double m, double zeta, double k, double force) {
  return force / k * unit_step_response(t, zeta, std::sqrt(k / m));
}

}  // namespace fepsim::acs

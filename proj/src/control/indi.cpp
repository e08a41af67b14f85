#include "fepsim/control/indi.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <limits>

namespace fepsim::control {

Matrix3d input_matrix(const dynamics::MassProperties& mass, double qbar,
                      const aero::Geometry& geometry, const Matrix3d& phi) {
  const Vector3d lengths(geometry.span, geometry.chord, geometry.span);
  return mass.inertia_inverse() * (qbar * geometry.wing_area) * lengths.asDiagonal() * phi;
}

IndiIncrement indi_increment(const Vector3d& vdot_command, const Vector3d& omega_dot_0,
                             const Vector3d& delta_0, const Matrix3d& g,
                             double condition_limit) {
  IndiIncrement out;
  const Vector3d error = vdot_command - omega_dot_0;
  Eigen::JacobiSVD<Matrix3d> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector3d sigma = svd.singularValues();
  const double smax = sigma(0);
  const double smin = sigma(2);
  out.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();

  if (smax > 0.0 && out.condition <= condition_limit) {
    out.surfaces = g.partialPivLu().solve(error) + delta_0;
    return out;
  }

  out.pseudo_inverse = true;
  Vector3d inv_sigma = Vector3d::Zero();
  const double cutoff = smax / condition_limit;
  for (int i = 0; i < 3; ++i) {
    if (sigma(i) > cutoff && sigma(i) > 0.0) {
      inv_sigma(i) = 1.0 / sigma(i);
    }
  }
  out.surfaces =
      svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose() * error + delta_0;
  return out;
}

IndiMemory make_indi_memory(const FilterParams& filter, double dt, const Vector3d& surfaces_deg) {
  IndiMemory m;
  m.acceleration_filter = SecondOrderLowPass<double, 3>(filter, dt, Vector3d::Zero());
  m.surface_filter = SecondOrderLowPass<double, 3>(filter, dt, surfaces_deg);
  m.delta_0 = surfaces_deg;
  return m;
}

Vector3d estimate_omega_dot(const Vector3d& omega, IndiMemory& memory, double dt) {
  const Vector3d difference =
      memory.primed ? Vector3d((omega - memory.previous_omega) / dt) : Vector3d::Zero();
  memory.previous_omega = omega;
  memory.primed = true;
  memory.omega_dot_0 = memory.acceleration_filter.update(difference);
  return memory.omega_dot_0;
}

IndiController::IndiController(const IndiConfig& config, const dynamics::ActuatorSet& actuators,
                               double dt, const Vector3d& initial_surfaces_deg)
    : config_(config),
      actuators_(actuators),
      dt_(dt),
      memory_(make_indi_memory(config.filter, dt, initial_surfaces_deg)) {}

IndiOutput IndiController::update(const RateCommand& command, const Vector3d& omega,
                                  const Vector3d& achieved_surfaces_deg, const Matrix3d& g) {
  IndiOutput out;
  const Vector3d omega_dot_0 = estimate_omega_dot(omega, memory_, dt_);
  const Vector3d filtered = memory_.surface_filter.update(achieved_surfaces_deg);
  if (config_.delta_feedback == DeltaFeedback::FilteredAchieved) {
    memory_.delta_0 = filtered;
  }
  for (int i = 0; i < 3; ++i) {
    memory_.delta_0[i] = actuators_[static_cast<std::size_t>(i)].clamp(memory_.delta_0[i]);
  }

  out.vdot_command = virtual_input<double>(command.omega, omega, config_.gains);
  const IndiIncrement inc = indi_increment(out.vdot_command, omega_dot_0,
                                           memory_.delta_0 * kDegToRad, g,
                                           config_.condition_limit);
  out.pseudo_inverse = inc.pseudo_inverse;
  for (int i = 0; i < 3; ++i) {
    const double demanded = inc.surfaces[i] * kRadToDeg;
    const double clamped = actuators_[static_cast<std::size_t>(i)].clamp(demanded);
    out.saturated = out.saturated || clamped != demanded;
    out.surface_commands[i] = clamped;
  }
  if (config_.delta_feedback == DeltaFeedback::ClampedCommand) {
    memory_.delta_0 = out.surface_commands;
  }
  return out;
}

}  // namespace fepsim::control

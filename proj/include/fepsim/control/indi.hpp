#pragma once

// Single-loop INDI angular-rate control law.
//
//   omegadot_c = diag(Kp, Kq, Kr) (omega_c - omega)
//   delta      = g(x0)^-1 (omegadot_c - omegadot_0) + delta_0
//   g(x0)      = J^-1 qbar S diag(b, cbar, b) Phi

#include "fepsim/aero/aero_model.hpp"
#include "fepsim/control/filters.hpp"
#include "fepsim/dynamics/actuator.hpp"
#include "fepsim/dynamics/state.hpp"

namespace fepsim::control {

/// Commanded body rates p_c, q_c, r_c after envelope protection. rad/s.
struct RateCommand {
  Vector3d omega = Vector3d::Zero();
};

struct IndiGains {
  double kp = 4.0;  // 1/s
  double kq = 4.0;
  double kr = 4.0;

  bool valid() const { return kp > 0.0 && kq > 0.0 && kr > 0.0; }
  Vector3d diagonal() const { return {kp, kq, kr}; }
};

/// Source of delta_0. The clamped previous command turns the incremental law
/// into a one-step integrator that ignores actuator lag; it is kept for
/// comparison runs only.
enum class DeltaFeedback { FilteredAchieved, ClampedCommand };

struct IndiConfig {
  IndiGains gains;
  FilterParams filter;
  double condition_limit = 1e6;
  DeltaFeedback delta_feedback = DeltaFeedback::FilteredAchieved;
};

template <typename Scalar>
Vector3<Scalar> virtual_input(const Vector3<Scalar>& command, const Vector3<Scalar>& omega,
                              const IndiGains& gains) {
  return gains.diagonal().template cast<Scalar>().cwiseProduct(command - omega);
}

/// Input map of the rate dynamics: rad/s^2 per rad of deflection.
Matrix3d input_matrix(const dynamics::MassProperties& mass, double qbar,
                      const aero::Geometry& geometry, const Matrix3d& phi);

struct IndiIncrement {
  Vector3d surfaces = Vector3d::Zero();  // same units as delta_0
  bool pseudo_inverse = false;
  double condition = 0.0;
};

/// Incremental inversion. Falls back to the SVD pseudo-inverse when g is
/// rank deficient or its condition number exceeds `condition_limit`.
IndiIncrement indi_increment(const Vector3d& vdot_command, const Vector3d& omega_dot_0,
                             const Vector3d& delta_0, const Matrix3d& g,
                             double condition_limit = 1e6);

/// Controller memory. delta_0 is the achieved surface position passed through
/// the same low-pass as the acceleration estimate, in degrees.
struct IndiMemory {
  Vector3d omega_dot_0 = Vector3d::Zero();
  Vector3d delta_0 = Vector3d::Zero();
  Vector3d previous_omega = Vector3d::Zero();
  bool primed = false;
  SecondOrderLowPass<double, 3> acceleration_filter;
  SecondOrderLowPass<double, 3> surface_filter;

  bool operator==(const IndiMemory&) const = default;
};

IndiMemory make_indi_memory(const FilterParams& filter, double dt, const Vector3d& surfaces_deg);

/// Filtered backward difference of omega. Updates memory.omega_dot_0.
Vector3d estimate_omega_dot(const Vector3d& omega, IndiMemory& memory, double dt);

struct IndiOutput {
  Vector3d surface_commands = Vector3d::Zero();  // deg, inside the position bands
  Vector3d vdot_command = Vector3d::Zero();
  bool pseudo_inverse = false;
  bool saturated = false;
};

/// Runs one controller update: estimates omegadot_0 and the synchronized
/// delta_0, forms the virtual input and returns clamped surface commands.
class IndiController {
 public:
  IndiController() = default;
  IndiController(const IndiConfig& config, const dynamics::ActuatorSet& actuators, double dt,
                 const Vector3d& initial_surfaces_deg);

  IndiOutput update(const RateCommand& command, const Vector3d& omega,
                    const Vector3d& achieved_surfaces_deg, const Matrix3d& g);

  const IndiMemory& memory() const { return memory_; }
  const IndiConfig& config() const { return config_; }

 private:
  IndiConfig config_;
  dynamics::ActuatorSet actuators_ = dynamics::default_actuators();
  double dt_ = 0.001;
  IndiMemory memory_;
};

}  // namespace fepsim::control

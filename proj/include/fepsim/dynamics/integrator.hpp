#pragma once

// Fixed-step integration of the coupled translational, rotational and
// kinematic equations. Actuators and the thrust lag advance first with the
// same step; the rigid body then takes one classic RK4 step with those
// surface positions held while the force model is re-evaluated at every stage.

#include "fepsim/dynamics/actuator.hpp"
#include "fepsim/dynamics/rigid_body.hpp"
#include "fepsim/dynamics/state.hpp"

#include <cmath>
#include <utility>

namespace fepsim::dynamics {

template <typename Scalar>
struct ControlInputs {
  Vector3<Scalar> surface_commands = Vector3<Scalar>::Zero();  // deg
  Scalar thrust_command = Scalar(0);                           // lbf
};

struct IntegratorConfig {
  ActuatorSet actuators = default_actuators();
  double thrust_tau = 1.0;  // s
  double singularity_margin = kDefaultSingularityMargin;
};

template <typename Scalar>
using RigidBodyVector = Eigen::Matrix<Scalar, 12, 1>;

namespace detail {

template <typename Scalar>
RigidBodyVector<Scalar> pack(const BasicAircraftState<Scalar>& s) {
  RigidBodyVector<Scalar> x;
  x << s.velocity, s.omega, s.euler, s.position;
  return x;
}

template <typename Scalar>
void unpack(const RigidBodyVector<Scalar>& x, BasicAircraftState<Scalar>& s) {
  s.velocity = x.template segment<3>(0);
  s.omega = x.template segment<3>(3);
  s.euler = x.template segment<3>(6);
  s.position = x.template segment<3>(9);
}

}  // namespace detail

/// Time derivative of the 12-element rigid-body vector (V, omega, euler, NED).
/// `wrench` excludes gravity, which is added here from the mass properties.
template <typename Scalar>
RigidBodyVector<Scalar> rigid_body_derivative(const BasicAircraftState<Scalar>& s,
                                              const Wrench<Scalar>& wrench,
                                              const MassProperties& mass,
                                              Scalar singularity_margin) {
  const Vector3<Scalar> force =
      wrench.force + gravity_body<Scalar>(s.euler, Scalar(mass.weight()));
  RigidBodyVector<Scalar> d;
  d.template segment<3>(0) =
      translational_derivative<Scalar>(s.velocity, s.omega, force, Scalar(mass.mass()));
  d.template segment<3>(3) = rotational_derivative<Scalar>(
      s.omega, wrench.moment, mass.inertia().template cast<Scalar>(),
      mass.inertia_inverse().template cast<Scalar>());
  d.template segment<3>(6) = euler_kinematics<Scalar>(s.euler, s.omega, singularity_margin);
  d.template segment<3>(9) = body_to_ned<Scalar>(s.euler) * s.velocity;
  return d;
}

/// Advances the state by dt. `forces(state)` must return the body wrench
/// (aerodynamics + propulsion) for the given state.
template <typename Scalar, typename ForceModel>
BasicAircraftState<Scalar> integrate_step(const BasicAircraftState<Scalar>& state,
                                          const ControlInputs<Scalar>& inputs, Scalar dt,
                                          const MassProperties& mass,
                                          const IntegratorConfig& config,
                                          ForceModel&& forces) {
  using std::exp;
  BasicAircraftState<Scalar> next = state;
  for (int i = 0; i < kSurfaceCount; ++i) {
    next.surfaces[i] = actuator_step<Scalar>(state.surfaces[i], inputs.surface_commands[i],
                                             config.actuators[static_cast<std::size_t>(i)], dt);
  }
  next.thrust = state.thrust + (Scalar(1) - exp(-dt / Scalar(config.thrust_tau))) *
                                   (inputs.thrust_command - state.thrust);

  const Scalar margin = Scalar(config.singularity_margin);
  const RigidBodyVector<Scalar> x0 = detail::pack(state);
  BasicAircraftState<Scalar> stage = next;
  auto derivative = [&](const RigidBodyVector<Scalar>& x) {
    detail::unpack(x, stage);
    return rigid_body_derivative<Scalar>(stage, forces(std::as_const(stage)), mass, margin);
  };

  const RigidBodyVector<Scalar> k1 = derivative(x0);
  const RigidBodyVector<Scalar> k2 = derivative(x0 + Scalar(0.5) * dt * k1);
  const RigidBodyVector<Scalar> k3 = derivative(x0 + Scalar(0.5) * dt * k2);
  const RigidBodyVector<Scalar> k4 = derivative(x0 + dt * k3);
  const RigidBodyVector<Scalar> x1 = x0 + (dt / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);

  detail::unpack(x1, next);
  // the end state must itself be outside the guard band
  euler_kinematics<Scalar>(next.euler, next.omega, margin);
  return next;
}

}  // namespace fepsim::dynamics

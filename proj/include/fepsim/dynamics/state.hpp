#pragma once

#include "fepsim/dynamics/actuator.hpp"
#include "fepsim/dynamics/rigid_body.hpp"
#include "fepsim/dynamics/types.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace fepsim::dynamics {

/// Full rigid-body state plus actuator and thrust-lag states.
template <typename Scalar>
struct BasicAircraftState {
  Vector3<Scalar> velocity = Vector3<Scalar>::Zero();  // body u, v, w  [ft/s]
  Vector3<Scalar> omega = Vector3<Scalar>::Zero();     // body p, q, r  [rad/s]
  Vector3<Scalar> euler = Vector3<Scalar>::Zero();     // phi, theta, psi  [rad]
  Vector3<Scalar> position = Vector3<Scalar>::Zero();  // north, east, down  [ft]
  Vector3<Scalar> surfaces = Vector3<Scalar>::Zero();  // tail, aileron, rudder  [deg]
  Scalar thrust = Scalar(0);                           // [lbf]

  Scalar altitude() const { return -position.z(); }

  bool operator==(const BasicAircraftState&) const = default;
};

using AircraftState = BasicAircraftState<double>;

/// Mass, inertia tensor (slug ft^2) and weight. The inverse inertia is cached.
class MassProperties {
 public:
  MassProperties() : MassProperties(1.0, Matrix3d::Identity()) {}

  MassProperties(double mass, const Matrix3d& inertia, double gravity = kGravity)
      : mass_(mass), gravity_(gravity), inertia_(inertia) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw ConfigError("mass properties: mass must be positive and finite");
    }
    if (!inertia.allFinite() || !inertia.isApprox(inertia.transpose(), 1e-12)) {
      throw ConfigError("mass properties: inertia tensor must be finite and symmetric");
    }
    Eigen::LLT<Matrix3d> llt(inertia);
    if (llt.info() != Eigen::Success) {
      throw ConfigError("mass properties: inertia tensor is not positive definite");
    }
    inertia_inverse_ = llt.solve(Matrix3d::Identity());
  }

  double mass() const noexcept { return mass_; }
  double gravity() const noexcept { return gravity_; }
  double weight() const noexcept { return mass_ * gravity_; }
  const Matrix3d& inertia() const noexcept { return inertia_; }
  const Matrix3d& inertia_inverse() const noexcept { return inertia_inverse_; }

 private:
  double mass_;
  double gravity_;
  Matrix3d inertia_;
  Matrix3d inertia_inverse_;
};

/// Body-axis force [lbf] and moment [lbf ft], gravity excluded.
template <typename Scalar>
struct Wrench {
  Vector3<Scalar> force = Vector3<Scalar>::Zero();
  Vector3<Scalar> moment = Vector3<Scalar>::Zero();
};

}  // namespace fepsim::dynamics

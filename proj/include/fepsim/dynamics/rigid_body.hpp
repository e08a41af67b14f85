#pragma once

// Rigid-body equations of motion in body axes and Euler-angle kinematics.
//
// Angles are radians and rates rad/s inside this header. Vectors are
// (x, y, z) body components; Euler angles are ordered (phi, theta, psi).

#include "fepsim/dynamics/types.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace fepsim::dynamics {

/// Thrown when the pitch attitude enters the guard band around +/-90 deg.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const Vector3d& euler, const Vector3d& omega, double margin)
      : std::runtime_error(describe(euler, margin)), euler_(euler), omega_(omega) {}

  const Vector3d& euler() const noexcept { return euler_; }
  const Vector3d& omega() const noexcept { return omega_; }

 private:
  static std::string describe(const Vector3d& euler, double margin) {
    std::ostringstream os;
    os << "Euler kinematics singularity: theta = " << euler.y() * kRadToDeg
       << " deg is within " << margin * kRadToDeg << " deg of +/-90 deg (phi = "
       << euler.x() * kRadToDeg << " deg)";
    return os.str();
  }

  Vector3d euler_;
  Vector3d omega_;
};

inline constexpr double kDefaultSingularityMargin = 0.5 * kDegToRad;

/// Body-axis acceleration  Vdot = m^-1 [F - omega x (m V)].
template <typename Scalar>
Vector3<Scalar> translational_derivative(const Vector3<Scalar>& velocity,
                                         const Vector3<Scalar>& omega,
                                         const Vector3<Scalar>& force, Scalar mass) {
  return (force - omega.cross(mass * velocity)) / mass;
}

/// Angular acceleration  omegadot = J^-1 [M - omega x (J omega)].
///
/// Takes the inverse inertia so the per-step cost is a product; the inverse
/// is formed once when the mass properties are loaded.
template <typename Scalar>
Vector3<Scalar> rotational_derivative(const Vector3<Scalar>& omega,
                                      const Vector3<Scalar>& moment,
                                      const Matrix3<Scalar>& inertia,
                                      const Matrix3<Scalar>& inertia_inverse) {
  return inertia_inverse * (moment - omega.cross(inertia * omega));
}

template <typename Scalar>
Vector3<Scalar> rotational_derivative(const Vector3<Scalar>& omega,
                                      const Vector3<Scalar>& moment,
                                      const Matrix3<Scalar>& inertia) {
  return rotational_derivative<Scalar>(omega, moment, inertia, inertia.inverse());
}

/// Body-rate to Euler-rate transformation matrix.
template <typename Scalar>
Matrix3<Scalar> euler_rate_matrix(const Vector3<Scalar>& euler) {
  using std::cos;
  using std::sin;
  using std::tan;
  const Scalar sphi = sin(euler.x());
  const Scalar cphi = cos(euler.x());
  const Scalar ttheta = tan(euler.y());
  const Scalar sectheta = Scalar(1) / cos(euler.y());
  Matrix3<Scalar> t;
  t << Scalar(1), sphi * ttheta, cphi * ttheta,
       Scalar(0), cphi, -sphi,
       Scalar(0), sphi * sectheta, cphi * sectheta;
  return t;
}

/// Euler angle rates from body rates. Throws SingularityError when
/// |theta| >= 90 deg - margin.
template <typename Scalar>
Vector3<Scalar> euler_kinematics(const Vector3<Scalar>& euler, const Vector3<Scalar>& omega,
                                 Scalar margin = Scalar(kDefaultSingularityMargin)) {
  using std::abs;
  if (!(abs(euler.y()) < Scalar(kPi / 2) - margin)) {
    throw SingularityError(euler.template cast<double>(), omega.template cast<double>(),
                           static_cast<double>(margin));
  }
  return euler_rate_matrix(euler) * omega;
}

/// Direction cosine matrix rotating body-axis vectors into NED.
template <typename Scalar>
Matrix3<Scalar> body_to_ned(const Vector3<Scalar>& euler) {
  using std::cos;
  using std::sin;
  const Scalar cphi = cos(euler.x()), sphi = sin(euler.x());
  const Scalar cth = cos(euler.y()), sth = sin(euler.y());
  const Scalar cpsi = cos(euler.z()), spsi = sin(euler.z());
  Matrix3<Scalar> c;
  c << cth * cpsi, sphi * sth * cpsi - cphi * spsi, cphi * sth * cpsi + sphi * spsi,
       cth * spsi, sphi * sth * spsi + cphi * cpsi, cphi * sth * spsi - sphi * cpsi,
       -sth, sphi * cth, cphi * cth;
  return c;
}

/// Weight vector resolved in body axes (lbf) for a flat-earth NED frame.
template <typename Scalar>
Vector3<Scalar> gravity_body(const Vector3<Scalar>& euler, Scalar weight) {
  using std::cos;
  using std::sin;
  const Scalar cth = cos(euler.y());
  return weight * Vector3<Scalar>(-sin(euler.y()), sin(euler.x()) * cth, cos(euler.x()) * cth);
}

}  // namespace fepsim::dynamics

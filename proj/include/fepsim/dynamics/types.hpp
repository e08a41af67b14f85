#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace fepsim {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vector3d = Vector3<double>;
using Matrix3d = Matrix3<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

// Standard gravity in ft/s^2.
inline constexpr double kGravity = 32.174;

/// Raised when a configuration file is malformed or violates a data invariant.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for queries outside a hard validity range (altitude, etc).
class RangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fepsim

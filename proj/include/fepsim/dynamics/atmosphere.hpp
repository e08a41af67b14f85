#pragma once

#include "fepsim/dynamics/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fepsim::dynamics {

/// 1976 US standard atmosphere, troposphere and lower stratosphere, in
/// US customary units.
namespace isa {
inline constexpr double kSeaLevelTemperature = 518.67;     // R
inline constexpr double kSeaLevelPressure = 2116.22;       // lbf/ft^2
inline constexpr double kLapseRate = 0.00356616;           // R/ft
inline constexpr double kGasConstant = 1716.49;            // ft lbf / (slug R)
inline constexpr double kGamma = 1.4;
inline constexpr double kTropopause = 36089.24;            // ft
inline constexpr double kCeiling = 50000.0;                // ft
}  // namespace isa

template <typename Scalar>
struct AtmosphereProperties {
  Scalar temperature;     // R
  Scalar pressure;        // lbf/ft^2
  Scalar density;         // slug/ft^3
  Scalar speed_of_sound;  // ft/s
};

template <typename Scalar>
AtmosphereProperties<Scalar> standard_atmosphere(Scalar altitude_ft) {
  using std::exp;
  using std::pow;
  using std::sqrt;
  if (!(altitude_ft >= Scalar(0) && altitude_ft <= Scalar(isa::kCeiling))) {
    std::ostringstream os;
    os << "standard atmosphere: altitude " << altitude_ft << " ft outside [0, "
       << isa::kCeiling << "] ft";
    throw RangeError(os.str());
  }
  const double g_over_r = kGravity / isa::kGasConstant;
  const double t_tropo = isa::kSeaLevelTemperature - isa::kLapseRate * isa::kTropopause;
  Scalar temperature;
  Scalar pressure;
  if (altitude_ft <= Scalar(isa::kTropopause)) {
    temperature = Scalar(isa::kSeaLevelTemperature) - Scalar(isa::kLapseRate) * altitude_ft;
    pressure = Scalar(isa::kSeaLevelPressure) *
               pow(temperature / Scalar(isa::kSeaLevelTemperature),
                   Scalar(g_over_r / isa::kLapseRate));
  } else {
    const double p_tropo =
        isa::kSeaLevelPressure *
        std::pow(t_tropo / isa::kSeaLevelTemperature, g_over_r / isa::kLapseRate);
    temperature = Scalar(t_tropo);
    pressure = Scalar(p_tropo) *
               exp(-Scalar(g_over_r / t_tropo) * (altitude_ft - Scalar(isa::kTropopause)));
  }
  const Scalar density = pressure / (Scalar(isa::kGasConstant) * temperature);
  const Scalar a = sqrt(Scalar(isa::kGamma * isa::kGasConstant) * temperature);
  return {temperature, pressure, density, a};
}

/// Air data derived from body velocity and altitude.
template <typename Scalar>
struct BasicAtmosphereSample {
  Scalar rho = Scalar(0);             // slug/ft^3
  Scalar qbar = Scalar(0);            // lbf/ft^2
  Scalar mach = Scalar(0);
  Scalar airspeed = Scalar(0);        // true airspeed, ft/s
  Scalar alpha = Scalar(0);           // rad
  Scalar beta = Scalar(0);            // rad
  Scalar speed_of_sound = Scalar(0);  // ft/s
};

using AtmosphereSample = BasicAtmosphereSample<double>;

template <typename Scalar>
BasicAtmosphereSample<Scalar> air_data(const Vector3<Scalar>& body_velocity, Scalar altitude_ft) {
  using std::asin;
  using std::atan2;
  using std::clamp;
  const auto atm = standard_atmosphere(altitude_ft);
  BasicAtmosphereSample<Scalar> s;
  s.rho = atm.density;
  s.speed_of_sound = atm.speed_of_sound;
  s.airspeed = body_velocity.norm();
  s.qbar = Scalar(0.5) * s.rho * s.airspeed * s.airspeed;
  s.mach = s.airspeed / s.speed_of_sound;
  s.alpha = atan2(body_velocity.z(), body_velocity.x());
  s.beta = s.airspeed > Scalar(0)
               ? asin(clamp(body_velocity.y() / s.airspeed, Scalar(-1), Scalar(1)))
               : Scalar(0);
  return s;
}

}  // namespace fepsim::dynamics

#pragma once

#include "fepsim/aero/aero_model.hpp"
#include "fepsim/dynamics/integrator.hpp"
#include "fepsim/sim/config.hpp"

#include <stdexcept>
#include <string>

namespace fepsim::sim {

using dynamics::AircraftState;

/// Everything needed to evaluate forces on the airframe.
struct AircraftModel {
  dynamics::MassProperties mass;
  aero::AeroTables aero;
  aero::Geometry geometry;
  dynamics::IntegratorConfig integrator;
  double thrust_max = 25000.0;

  AircraftModel() = default;
  AircraftModel(const AircraftConfig& config, aero::AeroTables tables);
};

struct AirData {
  dynamics::AtmosphereSample sample;
  aero::AeroCoefficients coefficients;
  double nz = 0.0;  // -aerodynamic Z force / weight
};

AirData evaluate_air_data(const AircraftState& state, const AircraftModel& model);

/// Aerodynamic plus propulsive wrench. Thrust acts along body x.
dynamics::Wrench<double> body_wrench(const AircraftState& state, const AircraftModel& model);

class TrimError : public std::runtime_error {
 public:
  TrimError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

struct TrimResult {
  double alpha = 0.0;   // deg
  double tail = 0.0;    // deg
  double thrust = 0.0;  // lbf
  double residual = 0.0;
  int iterations = 0;
  AircraftState state;
};

/// Wings-level, constant-altitude equilibrium by Newton iteration on
/// (u_dot, w_dot, q_dot) from alpha = 2 deg, tail = 0, thrust = W/8.
TrimResult trim_level_flight(const AircraftModel& model, double altitude_ft, double airspeed_fps,
                             int max_iterations = 50, double tolerance = 1e-9);

/// Trimmed state rotated to a flight-path angle and bank.
AircraftState initial_state(const TrimResult& trim, const InitialCondition& initial);

}  // namespace fepsim::sim

#include "fepsim/sim/model.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace fepsim::sim {

AircraftModel::AircraftModel(const AircraftConfig& config, aero::AeroTables tables)
    : mass(config.mass_properties()),
      aero(std::move(tables)),
      geometry(config.geometry),
      integrator(config.integrator),
      thrust_max(config.thrust_max) {}

AirData evaluate_air_data(const AircraftState& state, const AircraftModel& model) {
  AirData out;
  out.sample = dynamics::air_data<double>(state.velocity, state.altitude());
  const aero::AeroQuery query{out.sample.alpha * kRadToDeg, out.sample.beta * kRadToDeg,
                              state.surfaces};
  out.coefficients = aero::lookup_coefficients(query, state.omega, out.sample, model.aero,
                                               model.geometry);
  out.nz = -out.sample.qbar * model.geometry.wing_area * out.coefficients.cz /
           model.mass.weight();
  return out;
}

dynamics::Wrench<double> body_wrench(const AircraftState& state, const AircraftModel& model) {
  const auto sample = dynamics::air_data<double>(state.velocity, state.altitude());
  const aero::AeroQuery query{sample.alpha * kRadToDeg, sample.beta * kRadToDeg, state.surfaces};
  const auto c =
      aero::lookup_coefficients(query, state.omega, sample, model.aero, model.geometry);
  auto w = aero::dimensionalize(c, sample.qbar, model.geometry);
  w.force.x() += state.thrust;
  return w;
}

namespace {

AircraftState level_state(double alpha_deg, double tail_deg, double thrust, double altitude,
                          double airspeed) {
  AircraftState s;
  const double a = alpha_deg * kDegToRad;
  s.velocity = Vector3d(airspeed * std::cos(a), 0.0, airspeed * std::sin(a));
  s.euler = Vector3d(0.0, a, 0.0);
  s.position = Vector3d(0.0, 0.0, -altitude);
  s.surfaces = Vector3d(tail_deg, 0.0, 0.0);
  s.thrust = thrust;
  return s;
}

Vector3d trim_residual(const Vector3d& x, const AircraftModel& model, double altitude,
                       double airspeed) {
  const AircraftState s = level_state(x[0], x[1], x[2], altitude, airspeed);
  const auto d = dynamics::rigid_body_derivative<double>(
      s, body_wrench(s, model), model.mass, model.integrator.singularity_margin);
  return {d[0], d[2], d[4]};
}

}  // namespace

TrimResult trim_level_flight(const AircraftModel& model, double altitude_ft, double airspeed_fps,
                             int max_iterations, double tolerance) {
  if (!(airspeed_fps > 0.0)) {
    throw TrimError("trim: airspeed must be positive", 0.0);
  }
  try {
    const auto atm = dynamics::standard_atmosphere<double>(altitude_ft);
    const double mach = airspeed_fps / atm.speed_of_sound;
    if (mach > model.aero.envelope.mach_max) {
      std::ostringstream os;
      os << "trim: Mach " << mach << " is outside the aero validity envelope (max "
         << model.aero.envelope.mach_max << ")";
      throw TrimError(os.str(), 0.0);
    }
  } catch (const RangeError& e) {
    throw TrimError(std::string("trim: ") + e.what(), 0.0);
  }

  Vector3d x(2.0, 0.0, model.mass.weight() / 8.0);
  const Vector3d h(1e-6, 1e-6, 1e-4);
  TrimResult out;
  Vector3d r = trim_residual(x, model, altitude_ft, airspeed_fps);
  int it = 0;
  while (r.norm() >= tolerance && it < max_iterations) {
    Matrix3d jac;
    for (int k = 0; k < 3; ++k) {
      Vector3d xp = x, xm = x;
      xp[k] += h[k];
      xm[k] -= h[k];
      jac.col(k) = (trim_residual(xp, model, altitude_ft, airspeed_fps) -
                    trim_residual(xm, model, altitude_ft, airspeed_fps)) /
                   (2.0 * h[k]);
    }
    const Eigen::PartialPivLU<Matrix3d> lu(jac);
    Vector3d dx = -lu.solve(r);
    if (!dx.allFinite()) {
      break;
    }
    // keep the alpha step inside the table grid cell scale
    const double limit = 5.0;
    if (std::abs(dx[0]) > limit) dx *= limit / std::abs(dx[0]);
    x += dx;
    r = trim_residual(x, model, altitude_ft, airspeed_fps);
    ++it;
  }
  out.alpha = x[0];
  out.tail = x[1];
  out.thrust = x[2];
  out.residual = r.norm();
  out.iterations = it;
  if (!(out.residual < tolerance)) {
    std::ostringstream os;
    os << "trim did not converge in " << it << " iterations (residual " << out.residual
       << ", alpha " << x[0] << " deg, tail " << x[1] << " deg, thrust " << x[2] << " lbf)";
    throw TrimError(os.str(), out.residual);
  }
  const auto [alo, ahi] = model.aero.axis_range(aero::Axis::Alpha);
  const auto& tail = model.integrator.actuators[0];
  if (x[0] < alo || x[0] > ahi || x[1] < tail.pos_min || x[1] > tail.pos_max || x[2] < 0.0 ||
      x[2] > model.thrust_max) {
    std::ostringstream os;
    os << "trim solution outside the model limits (alpha " << x[0] << " deg, tail " << x[1]
       << " deg, thrust " << x[2] << " lbf)";
    throw TrimError(os.str(), out.residual);
  }
  out.state = level_state(x[0], x[1], x[2], altitude_ft, airspeed_fps);
  return out;
}

AircraftState initial_state(const TrimResult& trim, const InitialCondition& initial) {
  AircraftState s = trim.state;
  s.euler = Vector3d(initial.bank * kDegToRad, (trim.alpha + initial.gamma) * kDegToRad, 0.0);
  return s;
}

}  // namespace fepsim::sim

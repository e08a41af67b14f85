#pragma once

#include "fepsim/aero/grid_table.hpp"
#include "fepsim/dynamics/atmosphere.hpp"
#include "fepsim/dynamics/state.hpp"
#include "fepsim/dynamics/types.hpp"

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace fepsim::aero {

enum class Coefficient { Cx = 0, Cy, Cz, Cl, Cm, Cn };
inline constexpr std::size_t kCoefficientCount = 6;

std::string to_string(Coefficient c);

/// Nondimensional body rate a term is multiplied by: p b/2V, q cbar/2V, r b/2V.
enum class RateFactor { None, P, Q, R };

struct CoefficientTerm {
  GridTable table;
  RateFactor rate = RateFactor::None;
};

/// Declared validity of the tabulated data.
struct ValidityEnvelope {
  double alpha_min = -10.0;  // deg
  double alpha_max = 45.0;
  double beta_min = -30.0;
  double beta_max = 30.0;
  double mach_max = 0.6;
};

/// Reference geometry. Square feet and feet.
struct Geometry {
  double wing_area = 300.0;
  double span = 30.0;
  double chord = 11.32;
};

/// Each coefficient is the sum of its terms. Immutable after load.
struct AeroTables {
  int version = 1;
  std::string name;
  ValidityEnvelope envelope;
  std::array<std::vector<CoefficientTerm>, kCoefficientCount> terms;

  const std::vector<CoefficientTerm>& operator[](Coefficient c) const {
    return terms[static_cast<std::size_t>(c)];
  }
  std::vector<CoefficientTerm>& operator[](Coefficient c) {
    return terms[static_cast<std::size_t>(c)];
  }

  /// Range of deflection covered by every table that depends on `axis`.
  std::pair<double, double> axis_range(Axis axis) const;
};

/// Loads the self-describing JSON table format (see docs/formats.md).
AeroTables load_aero_tables(const std::filesystem::path& path);
AeroTables parse_aero_tables(const std::string& text);
std::string serialize_aero_tables(const AeroTables& tables);

/// Builds tables from a manifest whose terms point at whitespace-separated
/// text grids (the layout used by published F-16 data listings).
AeroTables import_aero_manifest(const std::filesystem::path& manifest);

/// Static part of a coefficient query. Degrees.
struct AeroQuery {
  double alpha = 0.0;
  double beta = 0.0;
  Vector3d surfaces = Vector3d::Zero();  // tail, aileron, rudder
};

struct AeroCoefficients {
  double cx = 0.0, cy = 0.0, cz = 0.0;
  double cl = 0.0, cm = 0.0, cn = 0.0;
  double cz_alpha = 0.0;  // per rad
  bool out_of_envelope = false;

  Vector3d force() const { return {cx, cy, cz}; }
  Vector3d moment() const { return {cl, cm, cn}; }
};

/// Finite-difference steps used for derivatives, in degrees.
struct DerivativeSteps {
  double surface = 1.0;
  double alpha = 1.0;
};

/// Sum of the static (rate-free) terms of one coefficient.
double static_coefficient(Coefficient c, const AeroQuery& query, const AeroTables& tables,
                          bool* clamped = nullptr);

/// Full coefficient set including body-rate damping terms.
AeroCoefficients lookup_coefficients(const AeroQuery& query, const Vector3d& omega,
                                     const dynamics::AtmosphereSample& sample,
                                     const AeroTables& tables, const Geometry& geometry,
                                     const DerivativeSteps& steps = {});

/// F = qbar S (Cx, Cy, Cz),  M = qbar S (b Cl, cbar Cm, b Cn).
inline dynamics::Wrench<double> dimensionalize(const AeroCoefficients& c, double qbar,
                                               const Geometry& g) {
  const double qs = qbar * g.wing_area;
  dynamics::Wrench<double> w;
  w.force = qs * c.force();
  w.moment = qs * Vector3d(g.span * c.cl, g.chord * c.cm, g.span * c.cn);
  return w;
}

struct ControlEffectivity {
  Matrix3d phi = Matrix3d::Zero();  // rows Cl, Cm, Cn; columns tail, aileron, rudder; per rad
  bool one_sided = false;
};

/// Moment-coefficient derivatives with respect to each surface at the query
/// point: central differences of half-width `steps.surface`, one-sided near a
/// table edge.
ControlEffectivity effectivity(const AeroQuery& query, const AeroTables& tables,
                               const DerivativeSteps& steps = {});

struct Derivative {
  double value = 0.0;  // per rad
  bool one_sided = false;
};

/// dCz/dalpha per rad by central difference over alpha.
Derivative cz_alpha(const AeroQuery& query, const AeroTables& tables,
                    const DerivativeSteps& steps = {});

inline Derivative cz_alpha(double alpha_deg, const AeroTables& tables,
                           const DerivativeSteps& steps = {}) {
  return cz_alpha(AeroQuery{alpha_deg, 0.0, Vector3d::Zero()}, tables, steps);
}

}  // namespace fepsim::aero

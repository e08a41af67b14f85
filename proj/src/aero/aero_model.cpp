#include "fepsim/aero/aero_model.hpp"

#include <algorithm>
#include <limits>

namespace fepsim::aero {

namespace {

constexpr std::array<const char*, kCoefficientCount> kCoefficientNames = {"Cx", "Cy", "Cz",
                                                                          "Cl", "Cm", "Cn"};

AxisPoint to_point(const AeroQuery& q) {
  return {q.alpha, q.beta, q.surfaces[0], q.surfaces[1], q.surfaces[2]};
}

constexpr std::array<Axis, 3> kSurfaceAxes = {Axis::Tail, Axis::Aileron, Axis::Rudder};

}  // namespace

std::string to_string(Coefficient c) { return kCoefficientNames[static_cast<std::size_t>(c)]; }

std::pair<double, double> AeroTables::axis_range(Axis axis) const {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& coefficient : terms) {
    for (const auto& term : coefficient) {
      const auto& axes = term.table.axes();
      for (std::size_t d = 0; d < axes.size(); ++d) {
        if (axes[d] == axis) {
          lo = std::max(lo, term.table.breakpoints()[d].front());
          hi = std::min(hi, term.table.breakpoints()[d].back());
        }
      }
    }
  }
  if (axis == Axis::Alpha) {
    lo = std::max(lo, envelope.alpha_min);
    hi = std::min(hi, envelope.alpha_max);
  } else if (axis == Axis::Beta) {
    lo = std::max(lo, envelope.beta_min);
    hi = std::min(hi, envelope.beta_max);
  }
  return {lo, hi};
}

double static_coefficient(Coefficient c, const AeroQuery& query, const AeroTables& tables,
                          bool* clamped) {
  const AxisPoint point = to_point(query);
  double sum = 0.0;
  for (const auto& term : tables[c]) {
    if (term.rate == RateFactor::None) {
      sum += term.table.interpolate(point, clamped);
    }
  }
  return sum;
}

AeroCoefficients lookup_coefficients(const AeroQuery& query, const Vector3d& omega,
                                     const dynamics::AtmosphereSample& sample,
                                     const AeroTables& tables, const Geometry& geometry,
                                     const DerivativeSteps& steps) {
  AeroCoefficients out;
  const auto& env = tables.envelope;
  AeroQuery q = query;
  if (q.alpha < env.alpha_min || q.alpha > env.alpha_max || q.beta < env.beta_min ||
      q.beta > env.beta_max || sample.mach > env.mach_max) {
    out.out_of_envelope = true;
  }
  q.alpha = std::clamp(q.alpha, env.alpha_min, env.alpha_max);
  q.beta = std::clamp(q.beta, env.beta_min, env.beta_max);

  // nondimensional rates; zero at zero airspeed
  double p_hat = 0.0, q_hat = 0.0, r_hat = 0.0;
  if (sample.airspeed > 0.0) {
    const double half_over_v = 0.5 / sample.airspeed;
    p_hat = omega.x() * geometry.span * half_over_v;
    q_hat = omega.y() * geometry.chord * half_over_v;
    r_hat = omega.z() * geometry.span * half_over_v;
  }

  const AxisPoint point = to_point(q);
  std::array<double, kCoefficientCount> c{};
  for (std::size_t k = 0; k < kCoefficientCount; ++k) {
    for (const auto& term : tables.terms[k]) {
      const double v = term.table.interpolate(point, &out.out_of_envelope);
      switch (term.rate) {
        case RateFactor::None: c[k] += v; break;
        case RateFactor::P: c[k] += v * p_hat; break;
        case RateFactor::Q: c[k] += v * q_hat; break;
        case RateFactor::R: c[k] += v * r_hat; break;
      }
    }
  }
  out.cx = c[0];
  out.cy = c[1];
  out.cz = c[2];
  out.cl = c[3];
  out.cm = c[4];
  out.cn = c[5];
  out.cz_alpha = cz_alpha(q, tables, steps).value;
  return out;
}

ControlEffectivity effectivity(const AeroQuery& query, const AeroTables& tables,
                               const DerivativeSteps& steps) {
  ControlEffectivity out;
  const double h = steps.surface;
  for (int j = 0; j < 3; ++j) {
    const auto [lo, hi] = tables.axis_range(kSurfaceAxes[static_cast<std::size_t>(j)]);
    const double x = std::clamp(query.surfaces[j], lo, hi);
    double x_minus = x - h;
    double x_plus = x + h;
    if (x_plus > hi) {
      x_plus = x;
      out.one_sided = true;
    }
    if (x_minus < lo) {
      x_minus = x;
      out.one_sided = true;
    }
    AeroQuery a = query, b = query;
    a.surfaces[j] = x_plus;
    b.surfaces[j] = x_minus;
    const double span_rad = (x_plus - x_minus) * kDegToRad;
    if (span_rad <= 0.0) {
      continue;
    }
    for (int i = 0; i < 3; ++i) {
      const auto c = static_cast<Coefficient>(static_cast<int>(Coefficient::Cl) + i);
      out.phi(i, j) = (static_coefficient(c, a, tables) - static_coefficient(c, b, tables)) /
                      span_rad;
    }
  }
  return out;
}

Derivative cz_alpha(const AeroQuery& query, const AeroTables& tables,
                    const DerivativeSteps& steps) {
  Derivative out;
  const auto [lo, hi] = tables.axis_range(Axis::Alpha);
  const double x = std::clamp(query.alpha, lo, hi);
  double x_minus = x - steps.alpha;
  double x_plus = x + steps.alpha;
  if (x_plus > hi) {
    x_plus = x;
    out.one_sided = true;
  }
  if (x_minus < lo) {
    x_minus = x;
    out.one_sided = true;
  }
  if (x_plus <= x_minus) {
    return out;
  }
  AeroQuery a = query, b = query;
  a.alpha = x_plus;
  b.alpha = x_minus;
  out.value = (static_coefficient(Coefficient::Cz, a, tables) -
               static_coefficient(Coefficient::Cz, b, tables)) /
              ((x_plus - x_minus) * kDegToRad);
  return out;
}

}  // namespace fepsim::aero

#include "fepsim/protection/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fepsim::protection {

namespace {

double fade(double normalized, double onset) {
  return std::clamp((1.0 - normalized) / (1.0 - onset), 0.0, 1.0);
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

EnvelopeLimits lerp(const EnvelopeLimits& a, const EnvelopeLimits& b, double t) {
  auto mix = [t](double x, double y) { return x + t * (y - x); };
  EnvelopeLimits out;
  out.rate_min = a.rate_min + t * (b.rate_min - a.rate_min);
  out.rate_max = a.rate_max + t * (b.rate_max - a.rate_max);
  out.alpha_max = mix(a.alpha_max, b.alpha_max);
  out.alpha_min = mix(a.alpha_min, b.alpha_min);
  out.nz_max = mix(a.nz_max, b.nz_max);
  out.nz_min = mix(a.nz_min, b.nz_min);
  out.phi_max = mix(a.phi_max, b.phi_max);
  return out;
}

// cell index and weight along one schedule axis, with clamping
std::pair<std::size_t, double> locate(const std::vector<double>& bp, double x, bool& clamped) {
  if (bp.size() == 1) {
    clamped = clamped || x != bp.front();
    return {0, 0.0};
  }
  if (x < bp.front() || x > bp.back()) {
    clamped = true;
    x = std::clamp(x, bp.front(), bp.back());
  }
  auto it = std::upper_bound(bp.begin(), bp.end(), x);
  std::size_t i = static_cast<std::size_t>(std::distance(bp.begin(), it));
  i = std::clamp<std::size_t>(i, 1, bp.size() - 1) - 1;
  return {i, (x - bp[i]) / (bp[i + 1] - bp[i])};
}

}  // namespace

std::string EnvelopeLimits::check() const {
  const char* axis[] = {"p", "q", "r"};
  for (int i = 0; i < 3; ++i) {
    if (!(rate_min[i] < rate_max[i])) {
      return std::string(axis[i]) + " rate: min must be below max";
    }
    if (!(rate_min[i] < 0.0 && rate_max[i] > 0.0)) {
      return std::string(axis[i]) + " rate: limits must bracket zero";
    }
  }
  if (!(alpha_min < 0.0 && alpha_max > 0.0)) return "alpha: limits must bracket zero";
  if (!(nz_min < nz_max)) return "nz: min must be below max";
  if (!(nz_max > 0.0)) return "nz: max must be positive";
  if (!(phi_max > 0.0)) return "phi_max must be positive";
  return {};
}

std::string ProtectionGains::check() const {
  if (k_alpha < 0.0 || k_qdamp < 0.0 || k_phi < 0.0 || k_pdamp < 0.0 || k_rdamp < 0.0) {
    return "protection gains must be non-negative";
  }
  if (!(alpha_fade > 0.0 && alpha_fade < 1.0) || !(phi_fade > 0.0 && phi_fade < 1.0)) {
    return "fade onsets must lie in (0, 1)";
  }
  if (!(qbar_floor > 0.0)) return "qbar_floor must be positive";
  return {};
}

EnvelopeDatabase::EnvelopeDatabase()
    : EnvelopeDatabase({0.0}, {0.0}, {EnvelopeLimits{}}) {}

EnvelopeDatabase::EnvelopeDatabase(std::vector<double> mach, std::vector<double> altitude,
                                   std::vector<EnvelopeLimits> nodes)
    : mach_(std::move(mach)), altitude_(std::move(altitude)), nodes_(std::move(nodes)) {
  auto increasing = [](const std::vector<double>& v) {
    if (v.empty()) return false;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] > v[i - 1])) return false;
    }
    return true;
  };
  if (!increasing(mach_) || !increasing(altitude_)) {
    throw ConfigError("envelope database: grid axes must be non-empty and strictly increasing");
  }
  if (nodes_.size() != mach_.size() * altitude_.size()) {
    throw ConfigError("envelope database: expected " +
                      std::to_string(mach_.size() * altitude_.size()) + " nodes");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (auto msg = nodes_[i].check(); !msg.empty()) {
      throw ConfigError("envelope database node " + std::to_string(i) + ": " + msg);
    }
  }
}

EnvelopeLimits EnvelopeDatabase::sample(double mach, double altitude_ft, bool* clamped) const {
  bool c = false;
  const auto [im, tm] = locate(mach_, mach, c);
  const auto [ia, ta] = locate(altitude_, altitude_ft, c);
  if (clamped != nullptr) {
    *clamped = c;
  }
  const std::size_t im1 = std::min(im + 1, mach_.size() - 1);
  const std::size_t ia1 = std::min(ia + 1, altitude_.size() - 1);
  const EnvelopeLimits low = lerp(node(im, ia), node(im, ia1), ta);
  const EnvelopeLimits high = lerp(node(im1, ia), node(im1, ia1), ta);
  return lerp(low, high, tm);
}

Vector3d rate_protect(const Vector3d& omega_pilot, const EnvelopeLimits& limits) {
  return omega_pilot.cwiseMax(limits.rate_min).cwiseMin(limits.rate_max);
}

NzAlpha nz_equivalent_alpha(double weight, double nz_limit, double qbar, double wing_area,
                            double cz_alpha, double fallback_alpha, double qbar_floor) {
  if (!(qbar > qbar_floor) || cz_alpha == 0.0) {
    return {fallback_alpha, true};
  }
  return {weight * nz_limit / (qbar * wing_area * std::abs(cz_alpha)), false};
}

ChannelProtection longitudinal_protect(double q_pilot, double alpha, double q,
                                       double alpha_max_eff, const EnvelopeLimits& limits,
                                       const ProtectionGains& gains) {
  const double q_min = limits.rate_min.y();
  const double q_max = limits.rate_max.y();
  const double q_rp = std::clamp(q_pilot, q_min, q_max);
  ChannelProtection out;
  out.normalized = alpha / alpha_max_eff;
  out.command = q_rp;
  if (q_pilot < 0.0) {
    return out;
  }
  const double lambda = fade(out.normalized, gains.alpha_fade);
  if (lambda >= 1.0) {
    return out;
  }
  const double restore = gains.k_alpha * (1.0 - out.normalized) * q_max - gains.k_qdamp * q;
  out.lambda = lambda;
  out.command = std::clamp(lambda * q_rp + (1.0 - lambda) * restore, q_min, q_max);
  out.active = true;
  return out;
}

ChannelProtection longitudinal_protect_min(double q_pilot, double alpha, double q,
                                           double alpha_min_eff, const EnvelopeLimits& limits,
                                           const ProtectionGains& gains) {
  const double q_min = limits.rate_min.y();
  const double q_max = limits.rate_max.y();
  const double q_rp = std::clamp(q_pilot, q_min, q_max);
  ChannelProtection out;
  out.normalized = alpha / alpha_min_eff;
  out.command = q_rp;
  if (q_pilot > 0.0) {
    return out;
  }
  const double lambda = fade(out.normalized, gains.alpha_fade);
  if (lambda >= 1.0) {
    return out;
  }
  const double restore = gains.k_alpha * (1.0 - out.normalized) * q_min - gains.k_qdamp * q;
  out.lambda = lambda;
  out.command = std::clamp(lambda * q_rp + (1.0 - lambda) * restore, q_min, q_max);
  out.active = true;
  return out;
}

ChannelProtection bank_protect(double p_pilot, double phi, double p, double r,
                               const EnvelopeLimits& limits, const ProtectionGains& gains) {
  const double p_min = limits.rate_min.x();
  const double p_max = limits.rate_max.x();
  const double p_rp = std::clamp(p_pilot, p_min, p_max);
  ChannelProtection out;
  out.normalized = std::abs(phi) / (limits.phi_max * kDegToRad);
  out.command = p_rp;
  // bank-reducing demand passes through
  if (p_pilot * phi < 0.0) {
    return out;
  }
  const double lambda = fade(out.normalized, gains.phi_fade);
  if (lambda >= 1.0) {
    return out;
  }
  const double phi_bar = out.normalized;
  const double restore = -sign(phi) * gains.k_phi * (1.0 - (1.0 - phi_bar)) * p_max -
                         gains.k_pdamp * p - gains.k_rdamp * r;
  out.lambda = lambda;
  out.command = std::clamp(lambda * p_rp + (1.0 - lambda) * restore, p_min, p_max);
  out.active = true;
  return out;
}

ProtectionResult protect(const Vector3d& omega_pilot, const FlightCondition& fc,
                         const EnvelopeDatabase& database, const ProtectionGains& gains) {
  ProtectionResult out;
  out.limits = database.sample(fc.mach, fc.altitude, &out.state.schedule_clamped);
  const EnvelopeLimits& lim = out.limits;

  // rate limits
  out.command = rate_protect(omega_pilot, lim);
  out.state.rate_active = out.command != omega_pilot;

  // effective alpha limits
  const double alpha_max_alpha = lim.alpha_max * kDegToRad;
  const double alpha_min_alpha = lim.alpha_min * kDegToRad;
  const NzAlpha nz_hi = nz_equivalent_alpha(fc.weight, lim.nz_max, fc.qbar, fc.wing_area,
                                            fc.cz_alpha, alpha_max_alpha, gains.qbar_floor);
  const NzAlpha nz_lo = nz_equivalent_alpha(fc.weight, lim.nz_min, fc.qbar, fc.wing_area,
                                            fc.cz_alpha, alpha_min_alpha, gains.qbar_floor);
  out.state.nz_fallback = nz_hi.fallback || nz_lo.fallback;
  out.state.alpha_max_eff = effective_alpha_max(alpha_max_alpha, nz_hi.alpha);
  out.state.alpha_min_eff = effective_alpha_min(alpha_min_alpha, nz_lo.alpha);

  // pitch
  const double q_pilot = omega_pilot.y();
  const ChannelProtection up = longitudinal_protect(q_pilot, fc.alpha, fc.omega.y(),
                                                    out.state.alpha_max_eff, lim, gains);
  const ChannelProtection down = longitudinal_protect_min(q_pilot, fc.alpha, fc.omega.y(),
                                                          out.state.alpha_min_eff, lim, gains);
  out.state.alpha_bar = up.normalized;
  if (up.active) {
    out.command.y() = up.command;
    out.state.lambda_long = up.lambda;
    out.state.long_active = true;
  } else if (down.active) {
    out.command.y() = down.command;
    out.state.lambda_long = down.lambda;
    out.state.long_active = true;
  }

  // roll
  const ChannelProtection bank =
      bank_protect(omega_pilot.x(), fc.phi, fc.omega.x(), fc.omega.z(), lim, gains);
  out.state.phi_bar = bank.normalized;
  if (bank.active) {
    out.command.x() = bank.command;
    out.state.lambda_lat = bank.lambda;
    out.state.lat_active = true;
  }
  return out;
}

}  // namespace fepsim::protection

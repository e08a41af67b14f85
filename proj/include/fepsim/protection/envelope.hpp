#pragma once

// Layered envelope protection acting on rate commands upstream of the
// control law. The pilot rate demand is clamped per axis. Alpha is
// normalized against the more restrictive of the alpha limit and the
// load-factor limit expressed as alpha. Near the limit a damped restoring
// rate is blended in as pilot authority fades. Bank angle is handled the
// same way with roll and yaw rate damping.

#include "fepsim/dynamics/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fepsim::protection {

/// Limits at one flight condition. Rates rad/s, angles deg, load factor g.
struct EnvelopeLimits {
  Vector3d rate_min = Vector3d(-1.5, -0.3, -0.3);
  Vector3d rate_max = Vector3d(1.5, 0.5, 0.3);
  double alpha_max = 25.0;
  double alpha_min = -5.0;
  double nz_max = 9.0;
  double nz_min = -3.0;
  double phi_max = 67.0;

  /// Empty string when valid, otherwise the first violated invariant.
  std::string check() const;
};

/// Limits scheduled on a (Mach, altitude) grid with bilinear interpolation.
class EnvelopeDatabase {
 public:
  EnvelopeDatabase();
  EnvelopeDatabase(std::vector<double> mach, std::vector<double> altitude,
                   std::vector<EnvelopeLimits> nodes);

  /// Clamps the query to the grid hull; `clamped` is set when it does.
  EnvelopeLimits sample(double mach, double altitude_ft, bool* clamped = nullptr) const;

  const std::vector<double>& mach() const { return mach_; }
  const std::vector<double>& altitude() const { return altitude_; }
  const EnvelopeLimits& node(std::size_t i_mach, std::size_t i_alt) const {
    return nodes_[i_mach * altitude_.size() + i_alt];
  }

 private:
  std::vector<double> mach_;
  std::vector<double> altitude_;
  std::vector<EnvelopeLimits> nodes_;  // mach-major
};

EnvelopeDatabase load_envelope_database(const std::filesystem::path& path);
EnvelopeDatabase parse_envelope_database(const std::string& text);

inline EnvelopeLimits schedule_limits(double mach, double altitude_ft,
                                      const EnvelopeDatabase& database, bool* clamped = nullptr) {
  return database.sample(mach, altitude_ft, clamped);
}

struct ProtectionGains {
  double k_alpha = 1.0;
  double k_qdamp = 0.5;
  double k_phi = 1.0;
  double k_pdamp = 0.5;
  double k_rdamp = 0.2;
  double alpha_fade = 0.85;
  double phi_fade = 0.85;
  double qbar_floor = 10.0;  // lbf/ft^2

  std::string check() const;
};

/// Per-axis clamp into [rate_min, rate_max].
Vector3d rate_protect(const Vector3d& omega_pilot, const EnvelopeLimits& limits);

struct NzAlpha {
  double alpha = 0.0;  // rad
  bool fallback = false;
};

/// Angle of attack equivalent to a load-factor limit,
///   alpha = W nz / (qbar S |Cz_alpha|).
/// Below `qbar_floor` (or with Cz_alpha = 0) returns `fallback_alpha` flagged.
NzAlpha nz_equivalent_alpha(double weight, double nz_limit, double qbar, double wing_area,
                            double cz_alpha, double fallback_alpha, double qbar_floor = 10.0);

inline double effective_alpha_max(double alpha_max_alpha, double alpha_max_nz) {
  return std::min(alpha_max_alpha, alpha_max_nz);
}

inline double effective_alpha_min(double alpha_min_alpha, double alpha_min_nz) {
  return std::max(alpha_min_alpha, alpha_min_nz);
}

/// Output of one protected channel.
struct ChannelProtection {
  double command = 0.0;     // rad/s
  double normalized = 0.0;  // alpha_bar or phi_bar
  double lambda = 1.0;      // pilot authority
  bool active = false;      // output differs from the rate-protected pilot demand
};

/// Nose-up side (applies to q_pilot >= 0).
ChannelProtection longitudinal_protect(double q_pilot, double alpha, double q,
                                       double alpha_max_eff, const EnvelopeLimits& limits,
                                       const ProtectionGains& gains);

/// Nose-down side, mirrored (applies to q_pilot <= 0). alpha_min_eff < 0.
ChannelProtection longitudinal_protect_min(double q_pilot, double alpha, double q,
                                           double alpha_min_eff, const EnvelopeLimits& limits,
                                           const ProtectionGains& gains);

/// Bank angle; applies unless the pilot demand reduces |phi|.
ChannelProtection bank_protect(double p_pilot, double phi, double p, double r,
                               const EnvelopeLimits& limits, const ProtectionGains& gains);

/// Aircraft quantities the protection layers read.
struct FlightCondition {
  double alpha = 0.0;  // rad
  double phi = 0.0;    // rad
  Vector3d omega = Vector3d::Zero();
  double qbar = 0.0;
  double mach = 0.0;
  double altitude = 0.0;
  double cz_alpha = 0.0;  // per rad
  double weight = 0.0;
  double wing_area = 0.0;
};

struct ProtectionState {
  double alpha_bar = 0.0;
  double phi_bar = 0.0;
  double lambda_long = 1.0;
  double lambda_lat = 1.0;
  double alpha_max_eff = 0.0;  // rad
  double alpha_min_eff = 0.0;  // rad
  bool rate_active = false;
  bool long_active = false;
  bool lat_active = false;
  bool nz_fallback = false;
  bool schedule_clamped = false;

  bool any_active() const { return rate_active || long_active || lat_active; }
};

struct ProtectionResult {
  Vector3d command = Vector3d::Zero();
  ProtectionState state;
  EnvelopeLimits limits;
};

/// All layers for one step.
ProtectionResult protect(const Vector3d& omega_pilot, const FlightCondition& condition,
                         const EnvelopeDatabase& database, const ProtectionGains& gains);

}  // namespace fepsim::protection

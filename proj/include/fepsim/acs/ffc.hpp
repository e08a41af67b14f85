#pragma once

#include "fepsim/dynamics/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fepsim::acs {

/// Hardware limits of the low-force sidestick, both axes.
inline constexpr double kPositionLimit = 24.0;  // deg
inline constexpr double kForceLimit = 27.0;     // lbf

struct FfcPoint {
  double position = 0.0;  // deg
  double force = 0.0;     // lbf

  bool operator==(const FfcPoint&) const = default;
};

/// Why a breakpoint list is not a valid force-feel curve.
struct FfcIssue {
  std::size_t index = 0;  // offending breakpoint
  std::string reason;

  std::string describe() const;
};

class FfcError : public ConfigError {
 public:
  explicit FfcError(FfcIssue issue)
      : ConfigError("invalid FFC curve: " + issue.describe()), issue_(std::move(issue)) {}
  const FfcIssue& issue() const noexcept { return issue_; }

 private:
  FfcIssue issue_;
};

/// Position -> force breakpoint curve. Positions strictly increasing, force
/// non-decreasing, everything inside the hardware limits.
class FfcCurve {
 public:
  /// Linear curve through the origin reaching +/-27 lbf at +/-24 deg.
  FfcCurve();

  /// Throws FfcError naming the offending breakpoint.
  explicit FfcCurve(std::vector<FfcPoint> points);

  static std::optional<FfcIssue> validate(std::span<const FfcPoint> points);

  /// Symmetric linear curve of the given gradient, saturated at the force limit.
  static FfcCurve linear(double gradient);

  /// Piecewise-linear interpolation; outside the span the end force holds.
  double force(double theta) const;

  /// Slope of the segment containing theta, lbf/deg. On a breakpoint the
  /// segment in `direction` (sign) is used. Zero outside the span.
  double gradient(double theta, double direction = 1.0) const;

  const std::vector<FfcPoint>& points() const noexcept { return points_; }

  bool operator==(const FfcCurve&) const = default;

 private:
  std::vector<FfcPoint> points_;
};

inline double ffc_force(double theta, const FfcCurve& curve) { return curve.force(theta); }

/// Curve equal to (1 - w) a + w b at every position, on the union of the
/// breakpoints.
FfcCurve blend(const FfcCurve& a, const FfcCurve& b, double w);

struct SoftStopResult {
  FfcCurve curve;
  bool repaired = false;  // monotone envelope had to be applied
};

/// Inserts a breakpoint at `softstop_position` and multiplies the gradient
/// beyond it (away from zero) by `multiplier`, saturating at the force limit.
/// Requires |softstop_position| < 24 and multiplier > 1 (std::invalid_argument).
SoftStopResult build_softstop_ffc(const FfcCurve& base, double softstop_position,
                                  double multiplier);

}  // namespace fepsim::acs

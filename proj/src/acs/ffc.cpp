#include "fepsim/acs/ffc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fepsim::acs {

std::string FfcIssue::describe() const {
  std::ostringstream os;
  os << "breakpoint " << index << ": " << reason;
  return os.str();
}

FfcCurve::FfcCurve() : FfcCurve(linear(kForceLimit / kPositionLimit)) {}

FfcCurve::FfcCurve(std::vector<FfcPoint> points) : points_(std::move(points)) {
  if (auto issue = validate(points_)) {
    throw FfcError(*issue);
  }
}

std::optional<FfcIssue> FfcCurve::validate(std::span<const FfcPoint> points) {
  if (points.size() < 2) {
    return FfcIssue{0, "a curve needs at least two breakpoints"};
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    std::ostringstream os;
    if (!std::isfinite(p.position) || !std::isfinite(p.force)) {
      return FfcIssue{i, "non-finite value"};
    }
    if (std::abs(p.position) > kPositionLimit) {
      os << "position " << p.position << " deg exceeds the " << kPositionLimit << " deg limit";
      return FfcIssue{i, os.str()};
    }
    if (std::abs(p.force) > kForceLimit) {
      os << "force " << p.force << " lbf exceeds the " << kForceLimit << " lbf limit";
      return FfcIssue{i, os.str()};
    }
    if (i > 0 && !(p.position > points[i - 1].position)) {
      os << "position " << p.position << " deg does not increase (previous "
         << points[i - 1].position << " deg)";
      return FfcIssue{i, os.str()};
    }
    if (i > 0 && p.force < points[i - 1].force) {
      os << "force " << p.force << " lbf at " << p.position << " deg decreases (previous "
         << points[i - 1].force << " lbf)";
      return FfcIssue{i, os.str()};
    }
  }
  return std::nullopt;
}

FfcCurve FfcCurve::linear(double gradient) {
  if (!(gradient > 0.0)) {
    throw std::invalid_argument("FFC gradient must be positive");
  }
  const double knee = std::min(kPositionLimit, kForceLimit / gradient);
  std::vector<FfcPoint> pts;
  if (knee < kPositionLimit) {
    pts.push_back({-kPositionLimit, -kForceLimit});
  }
  const double f_knee = knee < kPositionLimit ? kForceLimit : gradient * knee;
  pts.push_back({-knee, -f_knee});
  pts.push_back({knee, f_knee});
  if (knee < kPositionLimit) {
    pts.push_back({kPositionLimit, kForceLimit});
  }
  return FfcCurve(std::move(pts));
}

double FfcCurve::force(double theta) const {
  if (theta <= points_.front().position) return points_.front().force;
  if (theta >= points_.back().position) return points_.back().force;
  auto it = std::upper_bound(points_.begin(), points_.end(), theta,
                             [](double x, const FfcPoint& p) { return x < p.position; });
  const FfcPoint& hi = *it;
  const FfcPoint& lo = *(it - 1);
  const double t = (theta - lo.position) / (hi.position - lo.position);
  return lo.force + t * (hi.force - lo.force);
}

double FfcCurve::gradient(double theta, double direction) const {
  const bool forward = direction >= 0.0;
  if (forward ? theta >= points_.back().position : theta <= points_.front().position) {
    return 0.0;
  }
  if (forward ? theta < points_.front().position : theta > points_.back().position) {
    return 0.0;
  }
  std::size_t i = 0;
  if (forward) {
    // segment [p_i, p_i+1) containing theta
    auto it = std::upper_bound(points_.begin(), points_.end(), theta,
                               [](double x, const FfcPoint& p) { return x < p.position; });
    i = static_cast<std::size_t>(std::distance(points_.begin(), it)) - 1;
  } else {
    // segment (p_i, p_i+1] containing theta
    auto it = std::lower_bound(points_.begin(), points_.end(), theta,
                               [](const FfcPoint& p, double x) { return p.position < x; });
    i = static_cast<std::size_t>(std::distance(points_.begin(), it)) - 1;
  }
  const FfcPoint& a = points_[i];
  const FfcPoint& b = points_[i + 1];
  return (b.force - a.force) / (b.position - a.position);
}

FfcCurve blend(const FfcCurve& a, const FfcCurve& b, double w) {
  w = std::clamp(w, 0.0, 1.0);
  if (w == 0.0) return a;
  if (w == 1.0) return b;
  std::vector<double> xs;
  for (const auto& p : a.points()) xs.push_back(p.position);
  for (const auto& p : b.points()) xs.push_back(p.position);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<FfcPoint> pts;
  pts.reserve(xs.size());
  for (double x : xs) {
    const double fa = a.force(x);
    double f = std::clamp(fa + w * (b.force(x) - fa), -kForceLimit, kForceLimit);
    if (!pts.empty()) f = std::max(f, pts.back().force);  // rounding
    pts.push_back({x, f});
  }
  return FfcCurve(std::move(pts));
}

SoftStopResult build_softstop_ffc(const FfcCurve& base, double softstop_position,
                                  double multiplier) {
  if (!(std::abs(softstop_position) < kPositionLimit)) {
    throw std::invalid_argument("soft-stop position must lie strictly inside +/-24 deg");
  }
  if (!(multiplier > 1.0) || !std::isfinite(multiplier)) {
    throw std::invalid_argument("soft-stop gradient multiplier must be greater than 1");
  }
  const double s = softstop_position;
  const double dir = s >= 0.0 ? 1.0 : -1.0;
  const double f_s = base.force(s);
  const double cap = dir * kForceLimit;

  auto beyond = [&](double x) { return dir * (x - s) > 0.0; };
  auto steep = [&](double x) { return f_s + multiplier * (base.force(x) - f_s); };

  // points on the near side, the soft-stop itself, then the steepened far side
  std::vector<FfcPoint> near;
  std::vector<double> far_x;
  for (const auto& p : base.points()) {
    if (beyond(p.position)) {
      far_x.push_back(p.position);
    } else if (p.position != s) {
      near.push_back(p);
    }
  }
  if (dir < 0.0) {
    std::reverse(far_x.begin(), far_x.end());  // walk away from the soft stop
  }

  std::vector<FfcPoint> far;
  double prev_x = s;
  double prev_f = f_s;
  bool saturated = false;
  for (double x : far_x) {
    if (saturated) {
      far.push_back({x, cap});
      continue;
    }
    const double f = steep(x);
    if (dir * (f - cap) > 0.0) {
      // crossing of the force limit inside this segment
      const double t = (cap - prev_f) / (f - prev_f);
      const double xc = prev_x + t * (x - prev_x);
      if (xc != prev_x && xc != x) {
        far.push_back({xc, cap});
      }
      far.push_back({x, cap});
      saturated = true;
    } else {
      far.push_back({x, f});
    }
    prev_x = x;
    prev_f = f;
  }

  std::vector<FfcPoint> pts = near;
  pts.push_back({s, f_s});
  pts.insert(pts.end(), far.begin(), far.end());
  std::sort(pts.begin(), pts.end(),
            [](const FfcPoint& a, const FfcPoint& b) { return a.position < b.position; });

  SoftStopResult out;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].force < pts[i - 1].force) {
      pts[i].force = pts[i - 1].force;
      out.repaired = true;
    }
  }
  for (auto& p : pts) {
    p.force = std::clamp(p.force, -kForceLimit, kForceLimit);
  }
  out.curve = FfcCurve(std::move(pts));
  return out;
}

}  // namespace fepsim::acs

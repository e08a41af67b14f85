#pragma once

// Dense N-dimensional breakpoint grid with multilinear interpolation.

#include "fepsim/dynamics/types.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fepsim::aero {

/// Independent variables a coefficient grid can be tabulated over.
/// Angles and deflections are in degrees.
enum class Axis { Alpha = 0, Beta, Tail, Aileron, Rudder };
inline constexpr std::size_t kAxisCount = 5;

std::string to_string(Axis axis);
Axis axis_from_string(const std::string& name);

/// Point in the full query space, indexed by Axis.
using AxisPoint = std::array<double, kAxisCount>;

class GridTable {
 public:
  static constexpr std::size_t kMaxDims = 4;

  GridTable() = default;

  /// `values` are row-major over `breakpoints` (last axis fastest).
  /// Throws ConfigError on shape mismatch, non-increasing breakpoints or
  /// non-finite values.
  GridTable(std::vector<Axis> axes, std::vector<std::vector<double>> breakpoints,
            std::vector<double> values);

  const std::vector<Axis>& axes() const noexcept { return axes_; }
  const std::vector<std::vector<double>>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t dimensions() const noexcept { return axes_.size(); }

  bool depends_on(Axis axis) const {
    return std::find(axes_.begin(), axes_.end(), axis) != axes_.end();
  }

  /// Interpolates at `point`; coordinates outside the grid hull are clamped
  /// and `clamped` (when given) is set.
  template <typename Scalar>
  Scalar interpolate(const std::array<Scalar, kAxisCount>& point, bool* clamped = nullptr) const;

  /// Value stored at a node, by per-axis index.
  double node(std::span<const std::size_t> index) const;

 private:
  std::vector<Axis> axes_;
  std::vector<std::vector<double>> breakpoints_;
  std::vector<double> values_;
  std::vector<std::size_t> strides_;
};

template <typename Scalar>
Scalar GridTable::interpolate(const std::array<Scalar, kAxisCount>& point, bool* clamped) const {
  const std::size_t dims = axes_.size();
  std::array<std::size_t, kMaxDims> lower{};
  std::array<Scalar, kMaxDims> weight{};
  for (std::size_t d = 0; d < dims; ++d) {
    const auto& bp = breakpoints_[d];
    Scalar x = point[static_cast<std::size_t>(axes_[d])];
    if (x < Scalar(bp.front()) || x > Scalar(bp.back())) {
      x = std::clamp(x, Scalar(bp.front()), Scalar(bp.back()));
      if (clamped != nullptr) {
        *clamped = true;
      }
    }
    // cell [bp[i], bp[i+1]] containing x; the top node maps into the last cell
    auto it = std::upper_bound(bp.begin(), bp.end(), static_cast<double>(x));
    std::size_t i = static_cast<std::size_t>(std::distance(bp.begin(), it));
    i = std::clamp<std::size_t>(i, 1, bp.size() - 1) - 1;
    lower[d] = i;
    weight[d] = (x - Scalar(bp[i])) / Scalar(bp[i + 1] - bp[i]);
  }

  Scalar result = Scalar(0);
  const std::size_t corners = std::size_t{1} << dims;
  for (std::size_t c = 0; c < corners; ++c) {
    Scalar w = Scalar(1);
    std::size_t offset = 0;
    for (std::size_t d = 0; d < dims; ++d) {
      const bool upper = ((c >> d) & 1U) != 0U;
      w *= upper ? weight[d] : Scalar(1) - weight[d];
      offset += (lower[d] + (upper ? 1U : 0U)) * strides_[d];
    }
    if (w != Scalar(0)) {
      result += w * Scalar(values_[offset]);
    }
  }
  return result;
}

}  // namespace fepsim::aero

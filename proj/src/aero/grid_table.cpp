#include "fepsim/aero/grid_table.hpp"

#include <cmath>
#include <sstream>

namespace fepsim::aero {

namespace {
constexpr std::array<const char*, kAxisCount> kAxisNames = {"alpha", "beta", "tail", "aileron",
                                                            "rudder"};
}

std::string to_string(Axis axis) { return kAxisNames[static_cast<std::size_t>(axis)]; }

Axis axis_from_string(const std::string& name) {
  for (std::size_t i = 0; i < kAxisNames.size(); ++i) {
    if (name == kAxisNames[i]) {
      return static_cast<Axis>(i);
    }
  }
  throw ConfigError("unknown table axis '" + name + "'");
}

GridTable::GridTable(std::vector<Axis> axes, std::vector<std::vector<double>> breakpoints,
                     std::vector<double> values)
    : axes_(std::move(axes)), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (axes_.empty() || axes_.size() > kMaxDims) {
    throw ConfigError("grid table: dimension count must be 1.." + std::to_string(kMaxDims));
  }
  if (axes_.size() != breakpoints_.size()) {
    throw ConfigError("grid table: one breakpoint list is required per axis");
  }
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    for (std::size_t j = i + 1; j < axes_.size(); ++j) {
      if (axes_[i] == axes_[j]) {
        throw ConfigError("grid table: axis '" + to_string(axes_[i]) + "' repeated");
      }
    }
  }
  std::size_t expected = 1;
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    const auto& bp = breakpoints_[d];
    if (bp.size() < 2) {
      throw ConfigError("grid table: axis '" + to_string(axes_[d]) +
                        "' needs at least two breakpoints");
    }
    for (std::size_t k = 0; k < bp.size(); ++k) {
      if (!std::isfinite(bp[k]) || (k > 0 && !(bp[k] > bp[k - 1]))) {
        std::ostringstream os;
        os << "grid table: breakpoints of axis '" << to_string(axes_[d])
           << "' must be finite and strictly increasing (index " << k << ")";
        throw ConfigError(os.str());
      }
    }
    expected *= bp.size();
  }
  if (values_.size() != expected) {
    std::ostringstream os;
    os << "grid table: expected " << expected << " values, got " << values_.size();
    throw ConfigError(os.str());
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw ConfigError("grid table: non-finite value at flat index " + std::to_string(k));
    }
  }
  strides_.assign(axes_.size(), 1);
  for (std::size_t d = axes_.size() - 1; d > 0; --d) {
    strides_[d - 1] = strides_[d] * breakpoints_[d].size();
  }
}

double GridTable::node(std::span<const std::size_t> index) const {
  std::size_t offset = 0;
  for (std::size_t d = 0; d < axes_.size(); ++d) {
    offset += index[d] * strides_[d];
  }
  return values_.at(offset);
}

}  // namespace fepsim::aero

#pragma once

#include "fepsim/dynamics/types.hpp"

namespace fepsim::control {

struct FilterParams {
  double natural_frequency = 50.0;  // rad/s
  double damping = 0.7;
};

/// Second-order low-pass  wn^2 / (s^2 + 2 zeta wn s + wn^2), discretized with
/// the bilinear transform. Unity DC gain. Operates element-wise on a vector.
template <typename Scalar, int N>
class SecondOrderLowPass {
 public:
  using Vector = Eigen::Matrix<Scalar, N, 1>;

  SecondOrderLowPass() = default;

  SecondOrderLowPass(const FilterParams& params, Scalar dt, const Vector& initial) {
    const Scalar k = Scalar(2) / dt;
    const Scalar wn = Scalar(params.natural_frequency);
    const Scalar zeta = Scalar(params.damping);
    const Scalar a0 = k * k + Scalar(2) * zeta * wn * k + wn * wn;
    b0_ = wn * wn / a0;
    a1_ = (Scalar(2) * wn * wn - Scalar(2) * k * k) / a0;
    a2_ = (k * k - Scalar(2) * zeta * wn * k + wn * wn) / a0;
    reset(initial);
  }

  void reset(const Vector& value) {
    x1_ = x2_ = y1_ = y2_ = value;
  }

  const Vector& update(const Vector& x) {
    Vector y = b0_ * (x + Scalar(2) * x1_ + x2_) - a1_ * y1_ - a2_ * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y1_;
  }

  const Vector& output() const { return y1_; }

  bool operator==(const SecondOrderLowPass&) const = default;

 private:
  Scalar b0_ = Scalar(0);
  Scalar a1_ = Scalar(0);
  Scalar a2_ = Scalar(0);
  Vector x1_ = Vector::Zero(), x2_ = Vector::Zero(), y1_ = Vector::Zero(), y2_ = Vector::Zero();
};

}  // namespace fepsim::control

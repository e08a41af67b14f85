#pragma once

// Output-error fit of a second-order free response to a release transient:
//
//   theta(t) = c + A x(t - t0; zeta, wn)
//
// with x the unit free response from rest. A and c enter linearly and are
// eliminated by least squares; (zeta, wn) are found by a grid around a
// log-decrement estimate followed by Levenberg-Marquardt.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fepsim::acs {

class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

struct FitOptions {
  int grid_points = 21;
  int max_evaluations = 2000;
  double tolerance = 1e-12;
};

struct FitResult {
  double zeta = 0.0;
  double omega_n = 0.0;  // rad/s
  double amplitude = 0.0;
  double offset = 0.0;
  double sse = 0.0;
  int evaluations = 0;
  bool overdamped_branch = false;
};

/// Initial estimate from zero crossings and successive extrema of the
/// deviation from the final value. Empty when fewer than two extrema.
struct LogDecrement {
  double zeta = 0.0;
  double omega_n = 0.0;
  int extrema = 0;
};
LogDecrement log_decrement(std::span<const double> t, std::span<const double> theta);

/// The first sample is taken as the release instant.
FitResult fit_second_order(std::span<const double> t, std::span<const double> theta,
                           const FitOptions& options = {});

/// Sum of squared residuals of the best (A, c) for given (zeta, wn).
double release_sse(std::span<const double> t, std::span<const double> theta, double zeta,
                   double omega_n, double* amplitude = nullptr, double* offset = nullptr);

}  // namespace fepsim::acs

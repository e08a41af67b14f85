#include "fepsim/acs/sysid.hpp"

#include "fepsim/acs/stick.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fepsim::acs {

namespace {

double final_value(std::span<const double> theta) {
  const std::size_t n = std::max<std::size_t>(1, theta.size() / 10);
  return std::accumulate(theta.end() - static_cast<std::ptrdiff_t>(n), theta.end(), 0.0) /
         static_cast<double>(n);
}

// Best offset and amplitude for a basis response x, and the residual.
double project(std::span<const double> theta, const std::vector<double>& x, double* amplitude,
               double* offset, double* residuals = nullptr) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += theta[i];
    sxx += x[i] * x[i];
    sxy += x[i] * theta[i];
  }
  const double det = n * sxx - sx * sx;
  double a = 0.0;
  double c = sy / n;
  if (std::abs(det) > 1e-300) {
    a = (n * sxy - sx * sy) / det;
    c = (sy - a * sx) / n;
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = theta[i] - c - a * x[i];
    if (residuals != nullptr) residuals[i] = r;
    sse += r * r;
  }
  if (amplitude != nullptr) *amplitude = a;
  if (offset != nullptr) *offset = c;
  return sse;
}

std::vector<double> basis(std::span<const double> t, double zeta, double omega_n) {
  std::vector<double> x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    x[i] = unit_free_response(t[i] - t[0], zeta, omega_n);
  }
  return x;
}

struct ReleaseResidual {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  std::span<const double> t;
  std::span<const double> theta;

  int inputs() const { return 2; }
  int values() const { return static_cast<int>(t.size()); }

  // parameters are (log zeta, log omega_n)
  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
    const auto x = basis(t, std::exp(p[0]), std::exp(p[1]));
    project(theta, x, nullptr, nullptr, r.data());
    return 0;
  }
};

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  }
  return v;
}

}  // namespace

double release_sse(std::span<const double> t, std::span<const double> theta, double zeta,
                   double omega_n, double* amplitude, double* offset) {
  return project(theta, basis(t, zeta, omega_n), amplitude, offset);
}

LogDecrement log_decrement(std::span<const double> t, std::span<const double> theta) {
  LogDecrement out;
  if (t.size() < 3) {
    return out;
  }
  const double c0 = final_value(theta);
  const double y0 = theta[0] - c0;
  if (y0 == 0.0) {
    return out;
  }
  // lobes separated by hysteresis crossings of the final value
  const double h = 0.02 * std::abs(y0);
  std::vector<double> peak_t{t[0]};
  std::vector<double> peak_y{std::abs(y0)};
  double sign = y0 > 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double y = theta[i] - c0;
    if (sign * y < -h) {
      // crossed into the next lobe
      sign = -sign;
      peak_t.push_back(t[i]);
      peak_y.push_back(std::abs(y));
    } else if (sign * y > peak_y.back()) {
      peak_t.back() = t[i];
      peak_y.back() = sign * y;
    }
  }
  // drop lobes lost in noise
  std::size_t n = 1;
  while (n < peak_y.size() && peak_y[n] > 2.5 * h) {
    ++n;
  }
  out.extrema = static_cast<int>(n);
  if (n < 2) {
    return out;
  }
  const double half_period = (peak_t[n - 1] - peak_t[0]) / static_cast<double>(n - 1);
  const double delta = std::log(peak_y[0] / peak_y[n - 1]) / static_cast<double>(n - 1);
  out.zeta = delta / std::sqrt(kPi * kPi + delta * delta);
  const double omega_d = kPi / half_period;
  out.omega_n = omega_d / std::sqrt(1.0 - out.zeta * out.zeta);
  return out;
}

FitResult fit_second_order(std::span<const double> t, std::span<const double> theta,
                           const FitOptions& options) {
  if (t.size() != theta.size() || t.size() < 8) {
    throw std::invalid_argument("fit needs matching time and angle series of at least 8 samples");
  }
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) {
      throw std::invalid_argument("fit time stamps must be strictly increasing");
    }
  }
  const auto [lo, hi] = std::minmax_element(theta.begin(), theta.end());
  if (!(*hi - *lo > 1e-9 * (1.0 + std::abs(*hi)))) {
    throw FitError("no oscillation: trajectory is constant", 0.0);
  }

  FitResult result;
  const LogDecrement init = log_decrement(t, theta);
  std::vector<double> zetas;
  std::vector<double> omegas;
  const int g = std::max(options.grid_points, 2);
  if (init.extrema >= 2 && init.zeta > 0.0 && init.omega_n > 0.0) {
    zetas = linspace(std::max(0.01, 0.5 * init.zeta), std::min(0.99, 1.5 * init.zeta), g);
    omegas = linspace(0.7 * init.omega_n, 1.3 * init.omega_n, g);
  } else {
    // no oscillation: overdamped branch, scale from the half-decay time
    result.overdamped_branch = true;
    const double c0 = final_value(theta);
    const double y0 = theta[0] - c0;
    double t_half = t.back() - t.front();
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (std::abs(theta[i] - c0) < 0.5 * std::abs(y0)) {
        t_half = std::max(t[i] - t[0], 1e-6);
        break;
      }
    }
    for (double e : linspace(0.0, 1.0, g)) zetas.push_back(std::pow(10.0, e));
    for (double e : linspace(-1.0, 1.5, g)) omegas.push_back(std::pow(10.0, e) / t_half);
  }

  double best = std::numeric_limits<double>::infinity();
  double z0 = zetas.front();
  double w0 = omegas.front();
  for (double z : zetas) {
    for (double w : omegas) {
      const double sse = release_sse(t, theta, z, w);
      if (sse < best) {
        best = sse;
        z0 = z;
        w0 = w;
      }
    }
  }

  ReleaseResidual functor{t, theta};
  Eigen::NumericalDiff<ReleaseResidual> numeric(functor);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<ReleaseResidual>> lm(numeric);
  lm.parameters.maxfev = options.max_evaluations;
  lm.parameters.ftol = options.tolerance;
  lm.parameters.xtol = options.tolerance;
  Eigen::VectorXd p(2);
  p << std::log(z0), std::log(w0);
  const auto status = lm.minimize(p);

  result.zeta = std::exp(p[0]);
  result.omega_n = std::exp(p[1]);
  result.sse = release_sse(t, theta, result.zeta, result.omega_n, &result.amplitude,
                           &result.offset);
  result.evaluations = static_cast<int>(lm.nfev);
  if (status == Eigen::LevenbergMarquardtSpace::ImproperInputParameters ||
      status == Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation ||
      !std::isfinite(result.sse)) {
    throw FitError("fit did not converge (residual SSE " + std::to_string(result.sse) + ")",
                   result.sse);
  }
  return result;
}

}  // namespace fepsim::acs

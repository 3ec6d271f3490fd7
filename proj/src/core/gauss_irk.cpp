#include "core/gauss_irk.hpp"

#include <array>
#include <cmath>

#include "core/errors.hpp"

namespace gc3b {

namespace {
const double kSqrt15 = std::sqrt(15.0);
const std::array<std::array<double, 3>, 3> kA = {{
    {5.0 / 36.0, 2.0 / 9.0 - kSqrt15 / 15.0, 5.0 / 36.0 - kSqrt15 / 30.0},
    {5.0 / 36.0 + kSqrt15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - kSqrt15 / 24.0},
    {5.0 / 36.0 + kSqrt15 / 30.0, 2.0 / 9.0 + kSqrt15 / 15.0, 5.0 / 36.0},
}};
const std::array<double, 3> kB = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
}  // namespace

Eigen::VectorXd gauss6_step(const OdeRhs& f, const Eigen::VectorXd& y, double h) {
  std::array<Eigen::VectorXd, 3> k;
  const Eigen::VectorXd f0 = f(y);
  k.fill(f0);
  double scale = std::max(1.0, f0.lpNorm<Eigen::Infinity>());
  const double y_scale = std::max(1.0, y.lpNorm<Eigen::Infinity>());
  bool converged = false;
  for (int iter = 0; iter < 100; ++iter) {
    double delta = 0.0;
    std::array<Eigen::VectorXd, 3> next;
    for (int i = 0; i < 3; ++i) {
      Eigen::VectorXd yi = y;
      for (int j = 0; j < 3; ++j) yi += (h * kA[i][j]) * k[j];
      next[i] = f(yi);
      delta = std::max(delta, (next[i] - k[i]).lpNorm<Eigen::Infinity>());
      scale = std::max(scale, next[i].lpNorm<Eigen::Infinity>());
    }
    k = next;
    // Stage values are converged when they stop moving relative to the
    // right-hand side, or when their residual motion contributes less than
    // roundoff to the update h*sum(b_i k_i) (the iteration can cycle at the
    // noise floor of f when the state carries widely different magnitudes).
    if (delta <= 1e-14 * scale || std::abs(h) * delta <= 1e-16 * y_scale) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    raise(ErrorCode::StepFailure,
          "implicit Runge-Kutta stage iteration failed to converge; "
          "step too large for the fastest timescale");
  }
  Eigen::VectorXd out = y;
  for (int i = 0; i < 3; ++i) out += (h * kB[i]) * k[i];
  return out;
}

}  // namespace gc3b

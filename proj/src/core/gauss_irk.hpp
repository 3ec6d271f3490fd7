#pragma once

#include <Eigen/Dense>
#include <functional>

namespace gc3b {

using OdeRhs = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// One step of the 3-stage Gauss-Legendre implicit Runge-Kutta method:
// order 6, symplectic for canonical systems, exactly conserves quadratic
// invariants (up to the stage-equation solve). Stages are solved by
// fixed-point iteration, which converges for steps well inside the fastest
// timescale; throws StepFailure otherwise.
Eigen::VectorXd gauss6_step(const OdeRhs& f, const Eigen::VectorXd& y, double h);

}  // namespace gc3b

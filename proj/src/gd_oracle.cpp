#include "looptf/gd_oracle.hpp"

#include <cmath>
#include <string>

#include "looptf/errors.hpp"
#include "looptf/spectral.hpp"

namespace looptf {

RegressionProblem RegressionProblem::from_data(const RealMatrix& x,
                                               const RealVector& y) {
  if (x.empty()) throw DimensionError("RegressionProblem: empty matrix");
  if (y.dim() != x.rows()) {
    throw DimensionError("RegressionProblem: y dim " +
                         std::to_string(y.dim()) + " != n " +
                         std::to_string(x.rows()));
  }
  RegressionProblem p;
  p.x = x;
  p.y = y;
  p.gram_xx = gram(x);
  p.xty = transpose_matvec(x, y);
  // Unlike condition_number this admits n == d: the loss only needs X^T X
  // positive definite, not an overdetermined system.
  const auto [lo, hi] = sym_eig_extremes(p.gram_xx);
  if (hi <= 0.0 || lo < kSingularRatio * hi) {
    throw SingularityError(
        "RegressionProblem: X^T X not positive definite in working precision");
  }
  p.l = hi;
  p.mu = lo;
  p.kappa = hi / lo;
  return p;
}

void BoundParams::validate() const {
  if (!(kappa >= 1.0)) {
    throw ValueError("BoundParams: kappa must be >= 1, got " +
                     std::to_string(kappa));
  }
  if (!(r >= 0.0)) {
    throw ValueError("BoundParams: R must be >= 0, got " + std::to_string(r));
  }
}

double loss(const RegressionProblem& problem, const RealVector& theta) {
  if (theta.dim() != problem.x.cols()) {
    throw DimensionError("loss: theta dim " + std::to_string(theta.dim()) +
                         " != d " + std::to_string(problem.x.cols()));
  }
  const RealVector residual = problem.y - matvec(problem.x, theta);
  const double norm = l2_norm(residual);
  return 0.5 * norm * norm;
}

RealVector gradient(const RegressionProblem& problem,
                    const RealVector& theta) {
  if (theta.dim() != problem.x.cols()) {
    throw DimensionError("gradient: theta dim " + std::to_string(theta.dim()) +
                         " != d " + std::to_string(problem.x.cols()));
  }
  return matvec(problem.gram_xx, theta) - problem.xty;
}

GdTrajectory run_gd(const RegressionProblem& problem, const RealVector& theta0,
                    const LoopConfig& config,
                    const std::optional<RealVector>& theta_star) {
  config.validate();
  if (theta0.dim() != problem.x.cols()) {
    throw DimensionError("run_gd: theta0 dim " + std::to_string(theta0.dim()) +
                         " != d " + std::to_string(problem.x.cols()));
  }
  if (theta_star && theta_star->dim() != theta0.dim()) {
    throw DimensionError("run_gd: theta_star dim mismatch");
  }

  GdTrajectory traj;
  traj.theta_states.reserve(config.loops + 1);
  traj.losses.reserve(config.loops + 1);
  RealVector theta = theta0;
  auto record = [&](const RealVector& th) {
    traj.theta_states.push_back(th);
    traj.losses.push_back(loss(problem, th));
    if (theta_star) traj.param_errors.push_back(l2_norm(th - *theta_star));
  };
  record(theta);
  for (std::size_t t = 0; t < config.loops; ++t) {
    theta = theta - config.schedule.at(t) * gradient(problem, theta);
    record(theta);
  }
  return traj;
}

double theoretical_param_bound(std::size_t t, const BoundParams& bounds) {
  bounds.validate();
  return std::exp(-static_cast<double>(t) / bounds.kappa) * bounds.r *
         bounds.r;
}

double theoretical_prediction_bound(std::size_t t, const BoundParams& bounds) {
  bounds.validate();
  return std::fabs(bounds.alpha) * bounds.r *
         std::exp(-static_cast<double>(t) / (2.0 * bounds.kappa));
}

double log_param_bound(std::size_t t, const BoundParams& bounds) {
  bounds.validate();
  return -static_cast<double>(t) / bounds.kappa + 2.0 * std::log(bounds.r);
}

double log_prediction_bound(std::size_t t, const BoundParams& bounds) {
  bounds.validate();
  return -static_cast<double>(t) / (2.0 * bounds.kappa) +
         std::log(std::fabs(bounds.alpha) * bounds.r);
}

}  // namespace looptf

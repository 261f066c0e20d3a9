#pragma once

#include <optional>
#include <vector>

#include "looptf/linalg.hpp"
#include "looptf/looped_tf.hpp"

namespace looptf {

// Linear-regression problem 0.5*||y - X theta||^2 together with its
// smoothness constant L = ||X^T X||, strong-convexity constant
// mu = lambda_min(X^T X), and condition number kappa = L / mu.
struct RegressionProblem {
  RealMatrix x;
  RealVector y;
  RealMatrix gram_xx;  // X^T X, cached so each GD step is O(d^2)
  RealVector xty;      // X^T y
  double l = 0.0;
  double mu = 0.0;
  double kappa = 1.0;

  static RegressionProblem from_data(const RealMatrix& x, const RealVector& y);
};

struct GdTrajectory {
  std::vector<RealVector> theta_states;  // theta^(0) .. theta^(T)
  std::vector<double> param_errors;      // ||theta^(t) - theta*||, if given
  std::vector<double> losses;            // loss at every theta^(t)
};

// Hypothesis bundle for the convergence bounds.
struct BoundParams {
  double kappa = 1.0;  // >= 1
  double r = 1.0;      // >= 0, bound on ||theta^(0) - theta*||
  double alpha = 1.0;

  void validate() const;
};

double loss(const RegressionProblem& problem, const RealVector& theta);

// X^T X theta - X^T y
RealVector gradient(const RegressionProblem& problem, const RealVector& theta);

GdTrajectory run_gd(const RegressionProblem& problem, const RealVector& theta0,
                    const LoopConfig& config,
                    const std::optional<RealVector>& theta_star = std::nullopt);

// e^{-t/kappa} * R^2, the squared-parameter-distance bound.
double theoretical_param_bound(std::size_t t, const BoundParams& bounds);
// |alpha| * R * e^{-t/(2 kappa)}, the prediction-error bound.
double theoretical_prediction_bound(std::size_t t, const BoundParams& bounds);
// Natural logs of the two bounds, safe where the plain values underflow.
double log_param_bound(std::size_t t, const BoundParams& bounds);
double log_prediction_bound(std::size_t t, const BoundParams& bounds);

}  // namespace looptf

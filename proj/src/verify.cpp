#include "looptf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "looptf/errors.hpp"
#include "looptf/spectral.hpp"

namespace looptf {

namespace {

std::string render_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double equivalence_tolerance(const TaskInstance& task) {
  const double l = spectral_norm(gram(task.x));
  const double xty_scale = linf_norm(transpose_matvec(task.x, task.y));
  return 1e-9 * std::max({1.0, std::fabs(task.alpha), xty_scale, l});
}

EquivalenceReport check_equivalence(const TaskInstance& task,
                                    const LoopConfig& config, double tol) {
  if (task.alpha == 0.0) {
    throw InvalidQueryError(
        "check_equivalence: alpha must be nonzero (theta0 = -q0/alpha)");
  }
  config.validate();

  const LoopTrajectory tf = run_loops(task, config);

  const RegressionProblem problem =
      RegressionProblem::from_data(task.x, task.y);
  const RealVector theta0 = (-1.0 / task.alpha) * task.q0;
  const GdTrajectory gd = run_gd(problem, theta0, config, task.theta_star);

  EquivalenceReport report;
  report.instance_seed = task.seed;
  report.tolerance = tol;
  for (std::size_t t = 0; t < tf.q_states.size(); ++t) {
    const double gap = linf_norm(
        tf.q_states[t] + task.alpha * gd.theta_states[t]);
    report.max_state_gap = std::max(report.max_state_gap, gap);
  }
  report.output_gap = linf_norm(
      tf.tf_output - task.alpha * gd.theta_states.back());
  report.passed =
      report.max_state_gap <= tol && report.output_gap <= tol;
  return report;
}

BoundReport check_bound(const TaskInstance& task, std::size_t loops) {
  const RegressionProblem problem =
      RegressionProblem::from_data(task.x, task.y);
  LoopConfig config;
  config.loops = loops;
  config.schedule = StepSchedule::constant(1.0 / problem.l);
  return check_bound(task, config);
}

BoundReport check_bound(const TaskInstance& task, const LoopConfig& config) {
  config.validate();
  if (linf_norm(task.q0) != 0.0) {
    throw HypothesisError(
        "check_bound: the bound assumes the zero initial query q0 = 0");
  }
  const RegressionProblem problem =
      RegressionProblem::from_data(task.x, task.y);
  const double eta_star = 1.0 / problem.l;
  if (!config.schedule.is_constant() ||
      std::fabs(config.schedule.constant_value() - eta_star) >
          1e-12 * eta_star) {
    throw HypothesisError(
        "check_bound: the bound covers only the constant eta = 1/L schedule");
  }

  const LoopTrajectory traj = run_loops(task, config);

  BoundParams bounds;
  bounds.kappa = problem.kappa;
  bounds.r = 1.0;  // q0 = 0 and ||theta*|| = 1 give ||theta0 - theta*|| = 1
  bounds.alpha = task.alpha;

  BoundReport report;
  report.instance_seed = task.seed;
  report.per_step_margin.reserve(traj.per_step_errors.size());
  report.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < traj.per_step_errors.size(); ++t) {
    const double emp = traj.per_step_errors[t];
    const double bound = theoretical_prediction_bound(t, bounds);
    double margin;
    if (emp > 0.0 && emp < kLogDomainFloor && bound < kLogDomainFloor) {
      // Both sides near the subnormal range: compare logarithms so the
      // underflowed bound value cannot hide a genuine violation.  An exact
      // zero error passes trivially in the linear branch.
      margin = log_prediction_bound(t, bounds) - std::log(emp);
    } else {
      margin = bound - emp;
    }
    report.per_step_margin.push_back(margin);
    report.min_margin = std::min(report.min_margin, margin);
  }
  report.passed = report.min_margin >= -kBoundSlack;
  return report;
}

bool check_attention_oracle(std::size_t n, std::size_t d, std::size_t trials,
                            RandomSource& rng) {
  if (n == 0 || d == 0) {
    throw DimensionError("check_attention_oracle: dimensions must be >= 1");
  }
  const AttentionParams params = default_params(n, d);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const RealMatrix x = sample_gaussian_matrix(n, d, rng);
    RealVector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = rng.next_gaussian();
    RealVector q(d);
    for (std::size_t j = 0; j < d; ++j) q[j] = rng.next_gaussian();
    const double alpha = rng.next_gaussian();

    const PromptState prompt = make_prompt(x, y, q, alpha);
    const RealMatrix general = attn_general(prompt, params);
    const RealVector closed = attn_closed_form(x, y, q, alpha);

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j <= d; ++j) {
        if (general(i, j) != 0.0) return false;  // masked rows: exact zeros
      }
    }
    if (general(n, d) != 0.0) return false;  // projected-out label column
    for (std::size_t j = 0; j < d; ++j) {
      if (std::fabs(general(n, j) - closed[j]) > 1e-12) return false;
    }
  }
  return true;
}

std::string summary_line(const EquivalenceReport& report) {
  return "equivalence seed=" + std::to_string(report.instance_seed) +
         (report.passed ? " pass" : " FAIL") +
         " max_state_gap=" + render_double(report.max_state_gap) +
         " output_gap=" + render_double(report.output_gap) +
         " tol=" + render_double(report.tolerance);
}

std::string summary_line(const BoundReport& report) {
  return "bound seed=" + std::to_string(report.instance_seed) +
         (report.passed ? " pass" : " FAIL") +
         " min_margin=" + render_double(report.min_margin);
}

std::string report_to_json(const EquivalenceReport& report) {
  std::string out;
  out += "{\n";
  out += "  \"format\": \"looptf-equivalence-report\",\n";
  out += "  \"version\": " + std::to_string(kTaskFormatVersion) + ",\n";
  out += "  \"seed\": " + std::to_string(report.instance_seed) + ",\n";
  out += "  \"max_state_gap\": " + render_double(report.max_state_gap) + ",\n";
  out += "  \"output_gap\": " + render_double(report.output_gap) + ",\n";
  out += "  \"tolerance\": " + render_double(report.tolerance) + ",\n";
  out += std::string("  \"passed\": ") + (report.passed ? "true" : "false") +
         "\n";
  out += "}\n";
  return out;
}

std::string report_to_json(const BoundReport& report) {
  std::string out;
  out += "{\n";
  out += "  \"format\": \"looptf-bound-report\",\n";
  out += "  \"version\": " + std::to_string(kTaskFormatVersion) + ",\n";
  out += "  \"seed\": " + std::to_string(report.instance_seed) + ",\n";
  out += "  \"min_margin\": " + render_double(report.min_margin) + ",\n";
  out += "  \"steps\": " + std::to_string(report.per_step_margin.size()) +
         ",\n";
  out += std::string("  \"passed\": ") + (report.passed ? "true" : "false") +
         "\n";
  out += "}\n";
  return out;
}

}  // namespace looptf

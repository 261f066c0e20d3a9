// Acceptance gate: every release-blocking check in one binary.  Each
// criterion prints exactly one [PASS]/[FAIL] line (with its elapsed time
// against the stated budget); the exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "looptf/attention.hpp"
#include "looptf/experiment.hpp"
#include "looptf/gd_oracle.hpp"
#include "looptf/looped_tf.hpp"
#include "looptf/rng.hpp"
#include "looptf/spectral.hpp"
#include "looptf/task.hpp"
#include "looptf/verify.hpp"

using namespace looptf;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

int g_failures = 0;

// Runs one criterion, times it, and enforces the budget (0 = no budget).
void criterion(int index, const std::string& label, double budget_seconds,
               const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome.passed = false;
    outcome.detail = std::string("unexpected exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::string timing = fmt("%.2fs", elapsed);
  if (budget_seconds > 0.0) {
    timing += fmt(" of %.0fs budget", budget_seconds);
    if (elapsed > budget_seconds) {
      outcome.passed = false;
      outcome.detail += " [over budget]";
    }
  }

  if (!outcome.passed) ++g_failures;
  std::printf("[%s] %d %s: %s (%s)\n", outcome.passed ? "PASS" : "FAIL",
              index, label.c_str(), outcome.detail.c_str(), timing.c_str());
  std::fflush(stdout);
}

// Shape draws shared by the random-instance criteria.
TaskInstance draw_task(RandomSource& rng, std::size_t max_n, double alpha) {
  const std::size_t d = 1 + static_cast<std::size_t>(rng.next_u64() % 8);
  const std::size_t n =
      d + 1 + static_cast<std::size_t>(rng.next_u64() % (max_n - d));
  return make_task(n, d, alpha, rng);
}

double draw_alpha(RandomSource& rng) {
  const double sign = rng.next_unit() < 0.5 ? -1.0 : 1.0;
  return sign * std::exp(-2.0 + 4.0 * rng.next_unit());
}

Outcome equivalence_sweep() {
  std::size_t failures = 0;
  std::uint64_t first_bad = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    RandomSource rng(seed);
    const std::size_t d = 1 + static_cast<std::size_t>(rng.next_u64() % 8);
    const std::size_t n =
        d + 1 + static_cast<std::size_t>(rng.next_u64() % (128 - d));
    const std::size_t loops =
        1 + static_cast<std::size_t>(rng.next_u64() % 200);
    const double alpha = draw_alpha(rng);
    const TaskInstance task = make_task(n, d, alpha, rng);
    const RegressionProblem problem =
        RegressionProblem::from_data(task.x, task.y);

    LoopConfig config;
    config.loops = loops;
    std::vector<double> etas(loops);
    for (double& eta : etas) eta = (1.0 - rng.next_unit()) / problem.l;
    config.schedule = StepSchedule::explicit_steps(std::move(etas));

    const double tol = equivalence_tolerance(task);
    const EquivalenceReport report = check_equivalence(task, config, tol);
    worst_ratio = std::max(
        worst_ratio,
        std::max(report.max_state_gap, report.output_gap) / tol);
    if (!report.passed && failures++ == 0) first_bad = seed;
  }
  Outcome outcome;
  outcome.passed = failures == 0;
  outcome.detail =
      failures == 0
          ? fmt("1000/1000 instances match gradient descent; worst gap/tol "
                "= %.3g", worst_ratio)
          : fmt("%zu/1000 instances exceed tolerance, first seed %llu",
                failures, static_cast<unsigned long long>(first_bad));
  return outcome;
}

Outcome attention_sweep() {
  std::size_t failures = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    RandomSource rng(seed);
    const std::size_t n = 1 + static_cast<std::size_t>(rng.next_u64() % 32);
    const std::size_t d = 1 + static_cast<std::size_t>(rng.next_u64() % 8);
    if (!check_attention_oracle(n, d, 1, rng)) ++failures;
  }
  Outcome outcome;
  outcome.passed = failures == 0;
  outcome.detail =
      failures == 0
          ? "1000/1000 instances agree within 1e-12 with exact-zero masked "
            "entries"
          : fmt("%zu/1000 instances disagree beyond 1e-12 or leak into "
                "masked entries",
                failures);
  return outcome;
}

Outcome bound_sweep() {
  std::size_t violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t n : {16, 32, 64, 128}) {
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
      RandomSource rng(trial);
      const TaskInstance task = make_task(n, 4, 1.0, rng);
      const BoundReport report = check_bound(task, 200);
      min_margin = std::min(min_margin, report.min_margin);
      if (!report.passed) ++violations;
    }
  }
  Outcome outcome;
  outcome.passed = violations == 0;
  outcome.detail = fmt(
      "%zu violations over 40 runs x 201 steps; min margin %.3g", violations,
      min_margin);
  return outcome;
}

Outcome curve_shape() {
  ExperimentConfig config;  // d = 4, n = {16,32,64,128}, T = 200, eta = 1/L
  config.trials = 100;
  const auto records = run_experiment(config);
  const auto summaries = summarize(records);

  const double refs[4] = {4.57, 3.13, 2.07, 1.62};
  bool kappa_window = true;
  bool kappa_decreasing = true;
  bool slopes_steeper = true;
  std::string kappas = "{";
  std::string slopes = "{";
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    kappas += fmt(i == 0 ? "%.3g" : ", %.3g", summaries[i].mean_kappa);
    slopes += fmt(i == 0 ? "%.3g" : ", %.3g", summaries[i].slope);
    if (std::fabs(summaries[i].mean_kappa - refs[i]) > 0.35 * refs[i]) {
      kappa_window = false;
    }
    if (i > 0 && summaries[i].mean_kappa >= summaries[i - 1].mean_kappa) {
      kappa_decreasing = false;
    }
    if (i > 0 && summaries[i].slope >= summaries[i - 1].slope) {
      slopes_steeper = false;
    }
  }
  kappas += "}";
  slopes += "}";

  // Before the float64 error floor flattens the fast curves (their mean
  // log error bottoms out near log(1e-32) by t ~ 40-60 for the larger n),
  // the ordering is visible; report the early-window slopes alongside.
  std::string early = "{";
  const auto series = plot_series(records);
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::vector<double> ts;
    std::vector<double> vals;
    for (std::size_t j = 0; j < series[i].t.size(); ++j) {
      if (series[i].t[j] >= 10 && series[i].t[j] <= 30) {
        ts.push_back(static_cast<double>(series[i].t[j]));
        vals.push_back(series[i].mean_norm_log_err[j]);
      }
    }
    early += fmt(i == 0 ? "%.3g" : ", %.3g", fit_slope(ts, vals));
  }
  early += "}";

  Outcome outcome;
  outcome.passed = kappa_window && kappa_decreasing && slopes_steeper;
  outcome.detail =
      fmt("mean kappa %s vs {4.57, 3.13, 2.07, 1.62} +-35%% [%s], strictly "
          "decreasing [%s]; slopes over t=[10,100] %s strictly steeper for "
          "larger n [%s] (t=[10,30] slopes %s)",
          kappas.c_str(), kappa_window ? "ok" : "FAIL",
          kappa_decreasing ? "ok" : "FAIL", slopes.c_str(),
          slopes_steeper ? "ok" : "FAIL", early.c_str());
  return outcome;
}

Outcome contraction_sweep() {
  std::size_t violations = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomSource rng(seed);
    const TaskInstance task = draw_task(rng, 64, 1.0);
    const RegressionProblem problem =
        RegressionProblem::from_data(task.x, task.y);
    RealVector theta0(task.d());
    for (std::size_t j = 0; j < task.d(); ++j) {
      theta0[j] = rng.next_gaussian();
    }
    const RealVector center = least_squares(task.x, task.y);

    LoopConfig config;
    config.loops = 100;
    config.schedule = StepSchedule::constant(1.0 / problem.l);
    const GdTrajectory traj = run_gd(problem, theta0, config, center);

    const double rate = 1.0 - 1.0 / problem.kappa;
    double envelope = traj.param_errors[0] * traj.param_errors[0];
    for (double dist : traj.param_errors) {
      if (dist * dist > envelope + 1e-12) {
        ++violations;
        break;
      }
      envelope *= rate;
    }
  }
  Outcome outcome;
  outcome.passed = violations == 0;
  outcome.detail = fmt(
      "%zu/200 trajectories escape the (1 - 1/kappa)^t envelope", violations);
  return outcome;
}

Outcome constants_sweep() {
  std::size_t lipschitz_violations = 0;
  std::size_t convexity_violations = 0;
  RandomSource pair_rng(12345);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomSource rng(seed);
    const TaskInstance task = draw_task(rng, 64, 1.0);
    const RegressionProblem problem =
        RegressionProblem::from_data(task.x, task.y);
    for (int pair = 0; pair < 5; ++pair) {
      RealVector theta1(task.d()), theta2(task.d());
      for (std::size_t j = 0; j < task.d(); ++j) {
        theta1[j] = pair_rng.next_gaussian();
        theta2[j] = pair_rng.next_gaussian();
      }
      const double gap = l2_norm(theta1 - theta2);
      if (l2_norm(gradient(problem, theta1) - gradient(problem, theta2)) >
          (problem.l + 1e-9) * gap) {
        ++lipschitz_violations;
      }
      for (double gamma = 0.1; gamma < 0.95; gamma += 0.1) {
        const RealVector mix = gamma * theta1 + (1.0 - gamma) * theta2;
        const double chord = gamma * loss(problem, theta1) +
                             (1.0 - gamma) * loss(problem, theta2) -
                             0.5 * problem.mu * gamma * (1.0 - gamma) * gap *
                                 gap;
        if (loss(problem, mix) > chord + 1e-9) ++convexity_violations;
      }
    }
  }
  Outcome outcome;
  outcome.passed = lipschitz_violations == 0 && convexity_violations == 0;
  outcome.detail = fmt(
      "1000 pairs: %zu Lipschitz violations of L + 1e-9, %zu strong-convexity "
      "violations with mu over the gamma grid",
      lipschitz_violations, convexity_violations);
  return outcome;
}

Outcome hand_instances() {
  std::vector<std::string> problems;

  // n=2, d=1: X = (1, 2)^T, y = (1, 2), alpha = 2, eta = 1/L = 0.2.  One
  // loop lands exactly on q = -2, output 2, zero prediction error.
  {
    TaskInstance task;
    task.x = RealMatrix(2, 1, {1.0, 2.0});
    task.y = RealVector({1.0, 2.0});
    task.theta_star = RealVector({1.0});
    task.q0 = RealVector(1);
    task.alpha = 2.0;
    LoopConfig config;
    config.loops = 1;
    config.schedule = StepSchedule::constant(0.2);
    const LoopTrajectory traj = run_loops(task, config);
    if (!(traj.q_states[1] == RealVector({-2.0}) &&
          traj.tf_output == RealVector({2.0}) &&
          traj.per_step_errors[1] == 0.0)) {
      problems.push_back("one-step loop missed q = -2 exactly");
    }
  }

  // n=2, d=2 diagonal: X = diag(1, 2), y = (1, 0), eta = 1/4.  The first
  // coordinate follows 1 - 0.75^t, so theta^(2) = (0.4375, 0) exactly.
  {
    const RegressionProblem problem = RegressionProblem::from_data(
        RealMatrix(2, 2, {1.0, 0.0, 0.0, 2.0}), RealVector({1.0, 0.0}));
    LoopConfig config;
    config.loops = 2;
    config.schedule = StepSchedule::constant(0.25);
    const GdTrajectory traj = run_gd(problem, RealVector(2), config);
    if (!(traj.theta_states[2] == RealVector({0.4375, 0.0}))) {
      problems.push_back("two gd steps missed theta = (0.4375, 0) exactly");
    }
  }

  // Attention value: same n=2, d=1 data with q = 0 gives bottom entry
  // q^T X^T X + alpha y^T X = 2 * 5 = 10 on both paths.
  {
    const RealMatrix x(2, 1, {1.0, 2.0});
    const RealVector y({1.0, 2.0});
    const RealVector closed = attn_closed_form(x, y, RealVector(1), 2.0);
    const RealMatrix general =
        attn_general(make_prompt(x, y, RealVector(1), 2.0),
                     default_params(2, 1));
    if (!(closed == RealVector({10.0}) && general(2, 0) == 10.0)) {
      problems.push_back("attention bottom entry is not exactly 10");
    }
  }

  Outcome outcome;
  outcome.passed = problems.empty();
  if (problems.empty()) {
    outcome.detail = "all three hand-derived instances reproduce bit-exactly";
  } else {
    for (std::size_t i = 0; i < problems.size(); ++i) {
      if (i > 0) outcome.detail += "; ";
      outcome.detail += problems[i];
    }
  }
  return outcome;
}

Outcome determinism() {
  ExperimentConfig config;  // default sweep: d=4, n={16,32,64,128}, 10 trials
  const std::string baseline = records_to_csv(run_experiment(config));
  const std::string repeat = records_to_csv(run_experiment(config));

  const char* prior = std::getenv("LOOPTF_WORKERS");
  const std::string saved = prior ? prior : "";
  setenv("LOOPTF_WORKERS", "1", 1);
  const std::string serial = records_to_csv(run_experiment(config));
  setenv("LOOPTF_WORKERS", "4", 1);
  const std::string parallel = records_to_csv(run_experiment(config));
  if (prior) {
    setenv("LOOPTF_WORKERS", saved.c_str(), 1);
  } else {
    unsetenv("LOOPTF_WORKERS");
  }

  Outcome outcome;
  outcome.passed =
      baseline == repeat && baseline == serial && baseline == parallel;
  outcome.detail =
      outcome.passed
          ? fmt("4 runs (repeat, 1 worker, 4 workers) all byte-identical, "
                "%zu bytes", baseline.size())
          : "csv bytes differ across runs or worker counts";
  return outcome;
}

}  // namespace

int main() {
  criterion(1, "loop matches gradient descent", 60.0, equivalence_sweep);
  criterion(2, "attention closed form vs general", 10.0, attention_sweep);
  criterion(3, "prediction error under the ceiling", 5.0, bound_sweep);
  criterion(4, "convergence curves vs reference", 30.0, curve_shape);
  criterion(5, "parameter distance contraction", 10.0, contraction_sweep);
  criterion(6, "smoothness and convexity constants", 10.0, constants_sweep);
  criterion(7, "hand-derived instances", 1.0, hand_instances);
  criterion(8, "byte-identical experiment output", 0.0, determinism);

  std::printf("%d of 8 criteria passed\n", 8 - g_failures);
  return g_failures;
}

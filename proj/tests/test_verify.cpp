#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "looptf/errors.hpp"
#include "looptf/gd_oracle.hpp"
#include "looptf/verify.hpp"

using namespace looptf;

namespace {

// X = (1, 2)^T, y = (1, 2), theta* = (1): L = mu = 5, kappa = 1, and the
// loop lands on the optimum after a single eta = 1/5 step.
TaskInstance hand_task() {
  TaskInstance task;
  task.x = RealMatrix(2, 1, {1.0, 2.0});
  task.y = RealVector({1.0, 2.0});
  task.theta_star = RealVector({1.0});
  task.q0 = RealVector(1);
  task.alpha = 2.0;
  task.seed = 77;
  return task;
}

TaskInstance random_task(std::uint64_t seed, RandomSource& rng,
                         std::size_t max_d = 8, std::size_t max_n = 64) {
  rng = RandomSource(seed);
  const std::size_t d = 1 + static_cast<std::size_t>(rng.next_u64() % max_d);
  const std::size_t span = max_n - d;
  const std::size_t n =
      d + 1 + static_cast<std::size_t>(rng.next_u64() % span);
  const double sign = rng.next_unit() < 0.5 ? -1.0 : 1.0;
  const double alpha = sign * std::exp(-2.0 + 4.0 * rng.next_unit());
  return make_task(n, d, alpha, rng);
}

}  // namespace

TEST_CASE("equivalence tolerance tracks the data scale") {
  const TaskInstance task = hand_task();
  // max(1, |alpha| = 2, ||X^T y||_inf = 5, L = 5) = 5
  CHECK(equivalence_tolerance(task) == 1e-9 * 5.0);
}

TEST_CASE("hand task: transformer and gradient descent agree exactly") {
  const TaskInstance task = hand_task();
  LoopConfig config;
  config.loops = 25;
  config.schedule = StepSchedule::constant(0.2);

  const EquivalenceReport report =
      check_equivalence(task, config, equivalence_tolerance(task));
  CHECK(report.passed);
  CHECK(report.instance_seed == 77);
  // alpha = 2 is a power of two, so every scaling in the comparison is
  // exact and the trajectories coincide bit for bit.
  CHECK(report.max_state_gap == 0.0);
  CHECK(report.output_gap == 0.0);
}

TEST_CASE("zero loops is a trivially exact equivalence") {
  const TaskInstance task = hand_task();
  LoopConfig config;
  config.loops = 0;
  const EquivalenceReport report = check_equivalence(task, config, 1e-30);
  CHECK(report.passed);
  CHECK(report.max_state_gap == 0.0);
  CHECK(report.output_gap == 0.0);
}

TEST_CASE("random instances stay within the scaled tolerance") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomSource rng(0);
    const TaskInstance task = random_task(seed, rng);
    const RegressionProblem problem =
        RegressionProblem::from_data(task.x, task.y);

    LoopConfig config;
    config.loops = 1 + static_cast<std::size_t>(rng.next_u64() % 50);
    if (seed % 2 == 0) {
      config.schedule = StepSchedule::constant(1.0 / problem.l);
    } else {
      std::vector<double> etas(config.loops);
      for (double& eta : etas) eta = (1.0 - rng.next_unit()) / problem.l;
      config.schedule = StepSchedule::explicit_steps(std::move(etas));
    }

    const EquivalenceReport report =
        check_equivalence(task, config, equivalence_tolerance(task));
    CAPTURE(seed);
    CHECK(report.passed);
  }
}

TEST_CASE("equivalence rejects alpha = 0") {
  TaskInstance task = hand_task();
  task.alpha = 0.0;
  LoopConfig config;
  config.loops = 1;
  CHECK_THROWS_AS(check_equivalence(task, config, 1e-9), InvalidQueryError);
}

TEST_CASE("the faulted attention path is caught") {
  const TaskInstance task = hand_task();
  LoopConfig config;
  config.loops = 10;
  config.schedule = StepSchedule::constant(0.2);
  config.path = AttentionPath::faulted_closed_form;
  const EquivalenceReport report =
      check_equivalence(task, config, equivalence_tolerance(task));
  CHECK_FALSE(report.passed);
  CHECK(report.max_state_gap > 1.0);
}

TEST_CASE("hand task: prediction error sits exactly on the ceiling at t = 0") {
  const TaskInstance task = hand_task();
  const BoundReport report = check_bound(task, 50);
  CHECK(report.passed);
  CHECK(report.per_step_margin.size() == 51);
  // t = 0: both sides equal |alpha| = 2 exactly, so the margin is zero;
  // afterwards the loop is already optimal and every margin is positive.
  CHECK(report.per_step_margin[0] == 0.0);
  CHECK(report.min_margin == 0.0);
  for (std::size_t t = 1; t < report.per_step_margin.size(); ++t) {
    CHECK(report.per_step_margin[t] > 0.0);
  }
}

TEST_CASE("the bound holds on sampled tasks at full depth") {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    RandomSource rng(trial);
    const TaskInstance task = make_task(128, 4, 1.0, rng);
    const BoundReport report = check_bound(task, 200);
    CAPTURE(trial);
    CHECK(report.passed);
    CHECK(report.min_margin >= -kBoundSlack);  // an ulp below zero is fine
  }
}

TEST_CASE("the convenience overload builds the eta = 1/L schedule") {
  RandomSource rng(3);
  const TaskInstance task = make_task(16, 4, 1.0, rng);
  const RegressionProblem problem =
      RegressionProblem::from_data(task.x, task.y);
  LoopConfig config;
  config.loops = 40;
  config.schedule = StepSchedule::constant(1.0 / problem.l);
  const BoundReport via_loops = check_bound(task, 40);
  const BoundReport via_config = check_bound(task, config);
  CHECK(via_loops.min_margin == via_config.min_margin);
  CHECK(via_loops.per_step_margin == via_config.per_step_margin);
}

TEST_CASE("bound checks refuse data outside the hypotheses") {
  SUBCASE("nonzero initial query") {
    TaskInstance task = hand_task();
    task.q0 = RealVector({1.0});
    CHECK_THROWS_AS(check_bound(task, 10), HypothesisError);
  }
  SUBCASE("constant step other than 1/L") {
    LoopConfig config;
    config.loops = 10;
    config.schedule = StepSchedule::constant(0.3);
    CHECK_THROWS_AS(check_bound(hand_task(), config), HypothesisError);
  }
  SUBCASE("explicit schedule") {
    LoopConfig config;
    config.loops = 2;
    config.schedule = StepSchedule::explicit_steps({0.2, 0.2});
    CHECK_THROWS_AS(check_bound(hand_task(), config), HypothesisError);
  }
}

TEST_CASE("the faulted path violates the bound") {
  const TaskInstance task = hand_task();
  const RegressionProblem problem =
      RegressionProblem::from_data(task.x, task.y);
  LoopConfig config;
  config.loops = 10;
  config.schedule = StepSchedule::constant(1.0 / problem.l);
  config.path = AttentionPath::faulted_closed_form;
  const BoundReport report = check_bound(task, config);
  CHECK_FALSE(report.passed);
  CHECK(report.min_margin < -1.0);
}

TEST_CASE("attention oracle agreement") {
  RandomSource rng(11);
  CHECK(check_attention_oracle(2, 1, 10, rng));
  CHECK(check_attention_oracle(32, 8, 200, rng));
  CHECK_THROWS_AS(check_attention_oracle(0, 1, 1, rng), DimensionError);
  CHECK_THROWS_AS(check_attention_oracle(1, 0, 1, rng), DimensionError);
}

TEST_CASE("reports are deterministic") {
  auto make_reports = [] {
    RandomSource rng(5);
    const TaskInstance task = make_task(32, 4, 1.0, rng);
    LoopConfig config;
    config.loops = 30;
    const RegressionProblem problem =
        RegressionProblem::from_data(task.x, task.y);
    config.schedule = StepSchedule::constant(1.0 / problem.l);
    const EquivalenceReport eq =
        check_equivalence(task, config, equivalence_tolerance(task));
    const BoundReport bd = check_bound(task, config);
    return std::pair{report_to_json(eq), report_to_json(bd)};
  };
  const auto first = make_reports();
  const auto second = make_reports();
  CHECK(first.first == second.first);
  CHECK(first.second == second.second);
}

TEST_CASE("summary lines carry the verdict and gaps") {
  const TaskInstance task = hand_task();
  LoopConfig config;
  config.loops = 5;
  config.schedule = StepSchedule::constant(0.2);
  const EquivalenceReport eq =
      check_equivalence(task, config, equivalence_tolerance(task));
  const std::string eq_line = summary_line(eq);
  CHECK(eq_line.find("equivalence seed=77 pass") != std::string::npos);
  CHECK(eq_line.find("max_state_gap=0") != std::string::npos);

  const BoundReport bd = check_bound(task, 5);
  const std::string bd_line = summary_line(bd);
  CHECK(bd_line.find("bound seed=77 pass") != std::string::npos);
  CHECK(bd_line.find("min_margin=0") != std::string::npos);

  config.path = AttentionPath::faulted_closed_form;
  const EquivalenceReport bad =
      check_equivalence(task, config, equivalence_tolerance(task));
  CHECK(summary_line(bad).find(" FAIL ") != std::string::npos);
}

TEST_CASE("report JSON parses back with the expected fields") {
  const TaskInstance task = hand_task();
  LoopConfig config;
  config.loops = 5;
  config.schedule = StepSchedule::constant(0.2);
  const EquivalenceReport eq =
      check_equivalence(task, config, equivalence_tolerance(task));

  const nlohmann::json eq_doc = nlohmann::json::parse(report_to_json(eq));
  CHECK(eq_doc.at("format") == "looptf-equivalence-report");
  CHECK(eq_doc.at("version") == kTaskFormatVersion);
  CHECK(eq_doc.at("seed") == 77);
  CHECK(eq_doc.at("passed") == true);
  CHECK(eq_doc.at("max_state_gap") == 0.0);
  CHECK(eq_doc.at("output_gap") == 0.0);
  CHECK(eq_doc.at("tolerance").get<double>() ==
        doctest::Approx(5e-9).epsilon(1e-12));

  const BoundReport bd = check_bound(task, 5);
  const nlohmann::json bd_doc = nlohmann::json::parse(report_to_json(bd));
  CHECK(bd_doc.at("format") == "looptf-bound-report");
  CHECK(bd_doc.at("seed") == 77);
  CHECK(bd_doc.at("min_margin") == 0.0);
  CHECK(bd_doc.at("steps") == 6);
  CHECK(bd_doc.at("passed") == true);
}

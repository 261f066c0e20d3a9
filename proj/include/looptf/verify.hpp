#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "looptf/gd_oracle.hpp"
#include "looptf/looped_tf.hpp"
#include "looptf/rng.hpp"
#include "looptf/task.hpp"

namespace looptf {

// Outcome of running the transformer loop and the gradient-descent oracle
// side by side and measuring how far q^(t) strays from -alpha * theta^(t).
struct EquivalenceReport {
  std::uint64_t instance_seed = 0;
  double max_state_gap = 0.0;  // max over t of ||q^(t) + alpha*theta^(t)||_inf
  double output_gap = 0.0;     // ||tf_output - alpha*theta^(T)||_inf
  double tolerance = 0.0;
  bool passed = false;
};

// Outcome of comparing the per-step prediction error against the
// theoretical ceiling |alpha| * e^{-t/(2 kappa)}.
struct BoundReport {
  std::uint64_t instance_seed = 0;
  std::vector<double> per_step_margin;  // bound - empirical, per t
  double min_margin = 0.0;
  bool passed = false;
};

inline constexpr double kBoundSlack = 1e-9;
// Below this magnitude both sides of a bound comparison sit in (or near)
// the subnormal range, so the margin is taken between logarithms instead.
inline constexpr double kLogDomainFloor = 1e-300;

// Tolerance used by check_equivalence: scales with the data so 200 loops of
// float64 rounding drift never trip it on well-posed instances.
double equivalence_tolerance(const TaskInstance& task);

EquivalenceReport check_equivalence(const TaskInstance& task,
                                    const LoopConfig& config, double tol);

// Runs T loops with eta = 1/L from the task's q0 (which must be zero) and
// checks the prediction-error ceiling at every step.
BoundReport check_bound(const TaskInstance& task, std::size_t loops);
// Same check under an explicit config; refuses schedules other than the
// constant 1/L the bound's hypotheses cover.
BoundReport check_bound(const TaskInstance& task, const LoopConfig& config);

// Compares attn_general against attn_closed_form on `trials` random prompts
// (nonzero q included); true iff the computed block agrees within 1e-12 and
// every masked entry is exactly zero.
bool check_attention_oracle(std::size_t n, std::size_t d, std::size_t trials,
                            RandomSource& rng);

// One-line, line-oriented log form: seed, pass/fail, gaps.
std::string summary_line(const EquivalenceReport& report);
std::string summary_line(const BoundReport& report);

// Versioned JSON serialization, same envelope style as tasks.
std::string report_to_json(const EquivalenceReport& report);
std::string report_to_json(const BoundReport& report);

}  // namespace looptf

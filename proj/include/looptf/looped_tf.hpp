#pragma once

#include <cstddef>
#include <vector>

#include "looptf/attention.hpp"
#include "looptf/linalg.hpp"
#include "looptf/task.hpp"

namespace looptf {

// Which attention implementation drives the loop.  closed_form is the
// production path; general is the O(n^2 d) oracle path for cross-checking;
// faulted_closed_form flips the sign of the label term and exists only so
// verification failures are demonstrably detectable (mutation canary).
enum class AttentionPath { closed_form, general, faulted_closed_form };

// Step-size schedule: a single constant eta or one eta per loop.
struct StepSchedule {
  static StepSchedule constant(double eta);
  static StepSchedule explicit_steps(std::vector<double> etas);

  bool is_constant() const { return constant_eta_ > 0.0; }
  // eta to use at loop index t (0-based); for explicit schedules t must be
  // within range.
  double at(std::size_t t) const;
  double constant_value() const { return constant_eta_; }
  std::size_t explicit_size() const { return etas_.size(); }

 private:
  double constant_eta_ = 0.0;       // > 0 iff constant
  std::vector<double> etas_;        // nonempty iff explicit
};

struct LoopConfig {
  std::size_t loops = 0;  // T
  StepSchedule schedule = StepSchedule::constant(1.0);
  AttentionPath path = AttentionPath::closed_form;

  // Throws if an explicit schedule's length disagrees with loops.
  void validate() const;
};

struct LoopTrajectory {
  std::vector<RealVector> q_states;      // q^(0) .. q^(T)
  RealVector tf_output;                  // -q^(T)
  std::vector<double> per_step_errors;   // |<-q^(t), theta*> - alpha| per t
};

// One loop update Z <- Z - eta * Attn(Z): only the q block changes; the
// X, y, alpha blocks of the returned state are bit-identical to the input.
PromptState loop_step(const PromptState& prompt, double eta,
                      const AttentionParams& params,
                      AttentionPath path = AttentionPath::closed_form);

LoopTrajectory run_loops(const TaskInstance& task, const LoopConfig& config);

// |<output, theta_star> - alpha|
double prediction_error(const RealVector& output, const RealVector& theta_star,
                        double alpha);

}  // namespace looptf

#include "looptf/looped_tf.hpp"

#include <cmath>
#include <string>

#include "looptf/errors.hpp"

namespace looptf {

StepSchedule StepSchedule::constant(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ValueError("StepSchedule: constant step size must be positive, got " +
                     std::to_string(eta));
  }
  StepSchedule s;
  s.constant_eta_ = eta;
  return s;
}

StepSchedule StepSchedule::explicit_steps(std::vector<double> etas) {
  for (double eta : etas) {
    if (!(eta > 0.0) || !std::isfinite(eta)) {
      throw ValueError("StepSchedule: every step size must be positive, got " +
                       std::to_string(eta));
    }
  }
  StepSchedule s;
  s.etas_ = std::move(etas);
  return s;
}

double StepSchedule::at(std::size_t t) const {
  if (is_constant()) return constant_eta_;
  if (t >= etas_.size()) {
    throw ValueError("StepSchedule: loop index " + std::to_string(t) +
                     " beyond explicit schedule of length " +
                     std::to_string(etas_.size()));
  }
  return etas_[t];
}

void LoopConfig::validate() const {
  if (!schedule.is_constant() && schedule.explicit_size() != loops) {
    throw ValueError("LoopConfig: explicit schedule has " +
                     std::to_string(schedule.explicit_size()) +
                     " steps but loops=" + std::to_string(loops));
  }
}

PromptState loop_step(const PromptState& prompt, double eta,
                      const AttentionParams& params, AttentionPath path) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ValueError("loop_step: step size must be positive, got " +
                     std::to_string(eta));
  }
  PromptState next = prompt;
  switch (path) {
    case AttentionPath::general: {
      // Z - eta * Attn(Z); the mask makes every row but the last an exact
      // zero update, so the frozen blocks stay bit-identical anyway.  The
      // explicit full-matrix subtraction is the point of this path.
      const RealMatrix attn = attn_general(prompt, params);
      next.z = prompt.z - eta * attn;
      break;
    }
    case AttentionPath::closed_form:
    case AttentionPath::faulted_closed_form: {
      const RealMatrix x = prompt.x();
      const RealVector y = prompt.y();
      const RealVector q = prompt.q();
      const double alpha = prompt.alpha();
      const double label_sign =
          (path == AttentionPath::faulted_closed_form) ? -1.0 : 1.0;
      const RealVector attn =
          attn_closed_form(x, y, q, label_sign * alpha);
      for (std::size_t j = 0; j < prompt.d; ++j) {
        next.z(prompt.n, j) = q[j] - eta * attn[j];
      }
      break;
    }
  }
  return next;
}

LoopTrajectory run_loops(const TaskInstance& task, const LoopConfig& config) {
  config.validate();
  const AttentionParams params = default_params(task.n(), task.d());
  PromptState prompt = assemble_prompt(task);

  LoopTrajectory traj;
  traj.q_states.reserve(config.loops + 1);
  traj.per_step_errors.reserve(config.loops + 1);
  traj.q_states.push_back(prompt.q());
  traj.per_step_errors.push_back(
      prediction_error(-1.0 * prompt.q(), task.theta_star, task.alpha));

  for (std::size_t t = 0; t < config.loops; ++t) {
    prompt = loop_step(prompt, config.schedule.at(t), params, config.path);
    traj.q_states.push_back(prompt.q());
    traj.per_step_errors.push_back(
        prediction_error(-1.0 * prompt.q(), task.theta_star, task.alpha));
  }

  traj.tf_output = -1.0 * traj.q_states.back();
  return traj;
}

double prediction_error(const RealVector& output, const RealVector& theta_star,
                        double alpha) {
  if (output.dim() != theta_star.dim()) {
    throw DimensionError("prediction_error: output dim " +
                         std::to_string(output.dim()) + " != theta dim " +
                         std::to_string(theta_star.dim()));
  }
  return std::fabs(dot(output, theta_star) - alpha);
}

}  // namespace looptf

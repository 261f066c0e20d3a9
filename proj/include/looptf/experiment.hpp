#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "looptf/looped_tf.hpp"
#include "looptf/task.hpp"

namespace looptf {

// Sweep configuration for the convergence experiment: for each n in
// n_values, `trials` fresh tasks (trial i seeded with base_seed + i, shared
// across n) run T loops with eta = 1/L.
struct ExperimentConfig {
  std::size_t d = 4;
  std::vector<std::size_t> n_values = {16, 32, 64, 128};
  std::size_t loops = 200;
  std::size_t trials = 10;
  std::uint64_t base_seed = 0;
  double alpha = 1.0;
  std::string output_path;

  void validate() const;
};

// One CSV row: the state of one trial at one loop index.  emp_err and bound
// live in prediction space; norm_log_err is the parameter-space quantity
// log(||theta^(t) - theta*||^2 / ||theta^(0) - theta*||^2), floored at
// log(1e-300).
struct ConvergenceRecord {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double kappa = 0.0;
  std::size_t t = 0;
  double emp_err = 0.0;
  double bound = 0.0;
  double norm_log_err = 0.0;
};

// Per-n aggregate: mean condition number and mean final error over trials,
// plus the least-squares slope of the mean norm_log_err series over
// t in [10, 100].
struct NSummary {
  std::size_t n = 0;
  double mean_kappa = 0.0;
  double mean_final_err = 0.0;
  double slope = 0.0;
};

// Per-n mean series for external plotters: one point per t with the mean
// norm_log_err over trials and the matching mean parameter-space log bound
// (-t/kappa averaged over trials).
struct PlotSeries {
  std::size_t n = 0;
  std::vector<std::size_t> t;
  std::vector<double> mean_norm_log_err;
  std::vector<double> bound_log;
};

// Runs the sweep, possibly across worker threads (count from the
// LOOPTF_WORKERS environment variable, default hardware concurrency), and
// returns records in canonical (n, trial, t) order so output bytes never
// depend on scheduling.  Throws VerificationError if any record violates
// emp_err <= bound + 1e-9.
std::vector<ConvergenceRecord> run_experiment(const ExperimentConfig& config);

// Records for a single already-built task (used by the run subcommand);
// the emp_err <= bound check is enforced only when the schedule is the
// constant 1/L and q0 = 0, the regime the bound actually covers.
std::vector<ConvergenceRecord> records_for_task(const TaskInstance& task,
                                                const LoopConfig& config,
                                                std::size_t trial_index);

std::string records_to_csv(const std::vector<ConvergenceRecord>& records);
void write_records_csv(const std::vector<ConvergenceRecord>& records,
                       const std::string& path);
std::vector<ConvergenceRecord> read_records_csv(const std::string& path);

std::vector<PlotSeries> plot_series(
    const std::vector<ConvergenceRecord>& records);
std::string plot_series_to_csv(const std::vector<PlotSeries>& series);

std::vector<NSummary> summarize(const std::vector<ConvergenceRecord>& records);

// Ordinary-least-squares slope of vals against ts.
double fit_slope(const std::vector<double>& ts, const std::vector<double>& vals);

inline constexpr std::size_t kSlopeFitFirst = 10;
inline constexpr std::size_t kSlopeFitLast = 100;
inline constexpr double kNormLogFloor = 1e-300;

}  // namespace looptf

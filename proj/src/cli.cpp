#include "looptf/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "looptf/errors.hpp"
#include "looptf/gd_oracle.hpp"
#include "looptf/verify.hpp"

namespace looptf {

namespace {

std::string render_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string render_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Maps the library's exception hierarchy onto the documented exit codes.
template <typename Fn>
int with_exit_codes(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const VerificationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerificationFailure;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitMalformedInput;
  } catch (const ValueError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidArguments;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidArguments;
  } catch (const UnderdeterminedError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidArguments;
  } catch (const InvalidQueryError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidArguments;
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidArguments;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerificationFailure;
  }
}

StepSchedule schedule_from_eta(const std::string& eta,
                               const RegressionProblem& problem) {
  if (eta == "auto") return StepSchedule::constant(1.0 / problem.l);
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(eta, &consumed);
  } catch (const std::exception&) {
    throw ValueError("--eta must be 'auto' or a positive real, got '" + eta +
                     "'");
  }
  if (consumed != eta.size() || !(value > 0.0) || !std::isfinite(value)) {
    throw ValueError("--eta must be 'auto' or a positive real, got '" + eta +
                     "'");
  }
  return StepSchedule::constant(value);
}

}  // namespace

int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err) {
  return with_exit_codes(
      [&]() {
        RandomSource rng(options.seed);
        const TaskInstance task =
            make_task(options.n, options.d, options.alpha, rng);
        save_task(task, options.out);
        out << "wrote task n=" << task.n() << " d=" << task.d()
            << " seed=" << task.seed << " to " << options.out << '\n';
        return kExitOk;
      },
      err);
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return with_exit_codes(
      [&]() {
        TaskInstance task;
        if (!options.task_path.empty()) {
          task = load_task(options.task_path);
        } else {
          RandomSource rng(options.seed);
          task = make_task(options.n, options.d, options.alpha, rng);
        }

        const RegressionProblem problem =
            RegressionProblem::from_data(task.x, task.y);
        LoopConfig config;
        config.loops = options.loops;
        config.schedule = schedule_from_eta(options.eta, problem);

        const auto records = records_for_task(task, config, 0);
        if (!options.out.empty()) write_records_csv(records, options.out);
        out << render_full(records.back().emp_err) << '\n';
        return kExitOk;
      },
      err);
}

int cmd_verify(const VerifyOptions& options, std::ostream& out,
               std::ostream& err) {
  return with_exit_codes(
      [&]() {
        bool all_passed = true;
        std::uint64_t first_failing_seed = 0;
        auto note_failure = [&](std::uint64_t seed) {
          if (all_passed) first_failing_seed = seed;
          all_passed = false;
        };

        for (std::size_t i = 0; i < options.trials; ++i) {
          const std::uint64_t seed = options.seed + i;
          RandomSource rng(seed);
          const TaskInstance task =
              make_task(options.n, options.d, options.alpha, rng);

          const bool attention_ok =
              check_attention_oracle(options.n, options.d, 1, rng);
          out << "attention seed=" << seed
              << (attention_ok ? " pass" : " FAIL") << '\n';
          if (!attention_ok) note_failure(seed);

          const RegressionProblem problem =
              RegressionProblem::from_data(task.x, task.y);
          LoopConfig config;
          config.loops = options.loops;
          config.schedule = StepSchedule::constant(1.0 / problem.l);
          if (options.inject_fault) {
            config.path = AttentionPath::faulted_closed_form;
          }

          const EquivalenceReport eq =
              check_equivalence(task, config, equivalence_tolerance(task));
          out << summary_line(eq) << '\n';
          if (!eq.passed) note_failure(seed);

          const BoundReport bound = check_bound(task, config);
          out << summary_line(bound) << '\n';
          if (!bound.passed) note_failure(seed);
        }

        if (!all_passed) {
          throw VerificationError("verification failed, first failing seed " +
                                  std::to_string(first_failing_seed));
        }
        out << "all " << options.trials << " trials passed\n";
        return kExitOk;
      },
      err);
}

int cmd_experiment(const ExperimentConfig& config, std::ostream& out,
                   std::ostream& err) {
  return with_exit_codes(
      [&]() {
        const auto records = run_experiment(config);
        write_records_csv(records, config.output_path);
        for (const NSummary& s : summarize(records)) {
          out << "n=" << s.n << " mean_kappa=" << render_short(s.mean_kappa)
              << " mean_final_err=" << render_short(s.mean_final_err);
          if (std::isfinite(s.slope)) {
            out << " slope=" << render_short(s.slope);
          }
          out << '\n';
        }
        out << "wrote " << records.size() << " records to "
            << config.output_path << '\n';
        return kExitOk;
      },
      err);
}

int cmd_plot_data(const PlotDataOptions& options, std::ostream& out,
                  std::ostream& err) {
  return with_exit_codes(
      [&]() {
        const auto records = read_records_csv(options.input);
        const std::string csv = plot_series_to_csv(plot_series(records));
        if (options.out.empty()) {
          out << csv;
        } else {
          std::ofstream file(options.out, std::ios::binary);
          if (!file) {
            throw IoError("plot-data: cannot open " + options.out +
                          " for writing");
          }
          file.write(csv.data(), static_cast<std::streamsize>(csv.size()));
          if (!file) throw IoError("plot-data: write failed for " + options.out);
        }
        return kExitOk;
      },
      err);
}

}  // namespace looptf

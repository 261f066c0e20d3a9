#include <iostream>

#include "CLI11.hpp"
#include "looptf/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"simulator and verifier for a looped linear-attention "
               "transformer doing in-context linear regression"};
  app.require_subcommand(1);

  looptf::GenOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate a task file");
  cmd_gen->add_option("--n", gen.n, "example count")->required();
  cmd_gen->add_option("--d", gen.d, "feature dimension")->required();
  cmd_gen->add_option("--alpha", gen.alpha, "query scalar (nonzero)")
      ->default_val(1.0);
  cmd_gen->add_option("--seed", gen.seed, "rng seed")->default_val(0);
  cmd_gen->add_option("--out", gen.out, "output task path")->required();

  looptf::RunOptions run;
  CLI::App* cmd_run = app.add_subcommand(
      "run", "run the transformer loop on one task");
  cmd_run->add_option("--task", run.task_path,
                      "task file (otherwise generate from --n/--d/--seed)");
  cmd_run->add_option("--n", run.n, "example count");
  cmd_run->add_option("--d", run.d, "feature dimension");
  cmd_run->add_option("--alpha", run.alpha, "query scalar (nonzero)")
      ->default_val(1.0);
  cmd_run->add_option("--seed", run.seed, "rng seed")->default_val(0);
  cmd_run->add_option("-T,--T,--loops", run.loops, "loop count")->default_val(200);
  cmd_run->add_option("--eta", run.eta, "step size, 'auto' = 1/L")
      ->default_val("auto");
  cmd_run->add_option("--out", run.out, "per-iteration CSV path (optional)");

  looptf::VerifyOptions verify;
  CLI::App* cmd_verify = app.add_subcommand(
      "verify", "cross-check transformer loop, closed form, and bounds");
  cmd_verify->add_option("--trials", verify.trials, "seeds to verify")
      ->default_val(10);
  cmd_verify->add_option("--n", verify.n, "example count")->required();
  cmd_verify->add_option("--d", verify.d, "feature dimension")->required();
  cmd_verify->add_option("--alpha", verify.alpha, "query scalar (nonzero)")
      ->default_val(1.0);
  cmd_verify->add_option("-T,--T,--loops", verify.loops, "loop count")
      ->default_val(200);
  cmd_verify->add_option("--seed", verify.seed, "base seed")->default_val(0);
  cmd_verify->add_flag("--inject-fault", verify.inject_fault,
                       "flip a sign in the loop update (must fail)");

  looptf::ExperimentConfig experiment;
  experiment.output_path = "experiment.csv";
  CLI::App* cmd_experiment = app.add_subcommand(
      "experiment", "convergence sweep over n with CSV output");
  cmd_experiment->add_option("--d", experiment.d, "feature dimension")
      ->default_val(4);
  cmd_experiment
      ->add_option("--n", experiment.n_values, "sample sizes to sweep")
      ->delimiter(',');
  cmd_experiment->add_option("-T,--T,--loops", experiment.loops, "loop count")
      ->default_val(200);
  cmd_experiment->add_option("--trials", experiment.trials, "trials per n")
      ->default_val(10);
  cmd_experiment->add_option("--seed", experiment.base_seed, "base seed")
      ->default_val(0);
  cmd_experiment->add_option("--alpha", experiment.alpha, "query scalar")
      ->default_val(1.0);
  cmd_experiment->add_option("--out", experiment.output_path, "CSV path")
      ->default_val("experiment.csv");

  looptf::PlotDataOptions plot;
  CLI::App* cmd_plot = app.add_subcommand(
      "plot-data", "reshape an experiment CSV into per-n mean series");
  cmd_plot->add_option("input", plot.input, "experiment CSV path")->required();
  cmd_plot->add_option("--out", plot.out,
                       "output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? looptf::kExitOk : looptf::kExitInvalidArguments;
  }

  if (cmd_gen->parsed()) {
    return looptf::cmd_gen(gen, std::cout, std::cerr);
  }
  if (cmd_run->parsed()) {
    if (run.task_path.empty() && (run.n == 0 || run.d == 0)) {
      std::cerr << "error: run needs either --task or both --n and --d\n";
      return looptf::kExitInvalidArguments;
    }
    return looptf::cmd_run(run, std::cout, std::cerr);
  }
  if (cmd_verify->parsed()) {
    return looptf::cmd_verify(verify, std::cout, std::cerr);
  }
  if (cmd_experiment->parsed()) {
    return looptf::cmd_experiment(experiment, std::cout, std::cerr);
  }
  if (cmd_plot->parsed()) {
    return looptf::cmd_plot_data(plot, std::cout, std::cerr);
  }
  return looptf::kExitInvalidArguments;
}

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "looptf/experiment.hpp"

namespace looptf {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitInvalidArguments = 2;
inline constexpr int kExitIoError = 3;
inline constexpr int kExitMalformedInput = 4;

struct GenOptions {
  std::size_t n = 0;
  std::size_t d = 0;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct RunOptions {
  std::string task_path;  // when empty, generate from the inline flags below
  std::size_t n = 0;
  std::size_t d = 0;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  std::size_t loops = 200;
  std::string eta = "auto";  // "auto" = 1/L, otherwise a positive real
  std::string out;           // optional per-iteration CSV path
};

struct VerifyOptions {
  std::size_t trials = 10;
  std::size_t n = 0;
  std::size_t d = 0;
  double alpha = 1.0;
  std::size_t loops = 200;
  std::uint64_t seed = 0;
  bool inject_fault = false;  // mutation canary: flips a sign in the loop
};

struct PlotDataOptions {
  std::string input;
  std::string out;  // empty = standard output
};

// Each handler prints results to `out`, diagnostics to `err`, and returns
// one of the exit codes above (exceptions are mapped internally).
int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err);
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& options, std::ostream& out,
               std::ostream& err);
int cmd_experiment(const ExperimentConfig& config, std::ostream& out,
                   std::ostream& err);
int cmd_plot_data(const PlotDataOptions& options, std::ostream& out,
                  std::ostream& err);

}  // namespace looptf

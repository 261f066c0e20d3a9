#pragma once

#include <cstdint>
#include <string>

#include "looptf/linalg.hpp"
#include "looptf/rng.hpp"

namespace looptf {

class RandomSource;

// One synthetic in-context task: Gaussian examples X, unit-sphere target
// theta_star, realizable labels y = X * theta_star, query scalar alpha, and
// the initial query vector q0 (zero unless a caller overrides it).
struct TaskInstance {
  RealMatrix x;           // n x d
  RealVector y;           // n
  RealVector theta_star;  // d, unit norm
  RealVector q0;          // d
  double alpha = 1.0;
  std::uint64_t seed = 0;

  std::size_t n() const { return x.rows(); }
  std::size_t d() const { return x.cols(); }
};

// The (n+1) x (d+1) prompt matrix [[X, y], [q^T, alpha]] plus block
// extractors.  Loop steps replace the whole state; only the q block differs.
struct PromptState {
  RealMatrix z;  // (n+1) x (d+1)
  std::size_t n = 0;
  std::size_t d = 0;

  RealMatrix x() const;
  RealVector y() const;
  RealVector q() const;
  double alpha() const;
};

RealMatrix sample_gaussian_matrix(std::size_t n, std::size_t d,
                                  RandomSource& rng);
RealVector sample_unit_sphere(std::size_t d, RandomSource& rng);

// Draws X and theta_star from rng, labels y = X * theta_star, q0 = 0_d.
// The instance records rng's seed, so callers should hand over a fresh
// source rather than one that has already produced draws.
TaskInstance make_task(std::size_t n, std::size_t d, double alpha,
                       RandomSource& rng);

PromptState assemble_prompt(const TaskInstance& task);

// Prompt built from explicit blocks (arbitrary q, for oracle checks).
PromptState make_prompt(const RealMatrix& x, const RealVector& y,
                        const RealVector& q, double alpha);

// Versioned JSON serialization with 17-significant-digit floats so tasks
// round-trip bit-exactly.
std::string task_to_json(const TaskInstance& task);
TaskInstance task_from_json(const std::string& text);
void save_task(const TaskInstance& task, const std::string& path);
TaskInstance load_task(const std::string& path);

inline constexpr int kTaskFormatVersion = 1;

}  // namespace looptf

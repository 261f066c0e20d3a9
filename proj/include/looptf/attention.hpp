#pragma once

#include "looptf/linalg.hpp"
#include "looptf/task.hpp"

namespace looptf {

// Fixed attention parameters from the single-layer construction: identity
// query-key matrix, value projection that keeps the feature block and zeroes
// the label column, and a causal mask that lets only the query row attend to
// the n example rows.
struct AttentionParams {
  RealMatrix query_key;     // (d+1) x (d+1)
  RealMatrix value_output;  // (d+1) x (d+1)
  RealMatrix mask;          // (n+1) x (n+1)
};

AttentionParams default_params(std::size_t n, std::size_t d);

// Literal masked-Hadamard formula (M o (Z Q Z^T)) Z P.  O(n^2 d); exists as
// an independent oracle for the closed form below.
RealMatrix attn_general(const PromptState& prompt,
                        const AttentionParams& params);

// The nonzero block of the attention output with default parameters:
// (X^T X) q + alpha * X^T y.  O(n d^2); the production path.
RealVector attn_closed_form(const RealMatrix& x, const RealVector& y,
                            const RealVector& q, double alpha);

}  // namespace looptf

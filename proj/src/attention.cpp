#include "looptf/attention.hpp"

#include <string>

#include "looptf/errors.hpp"

namespace looptf {

AttentionParams default_params(std::size_t n, std::size_t d) {
  if (n == 0 || d == 0) {
    throw DimensionError("default_params: dimensions must be >= 1");
  }
  AttentionParams params;
  params.query_key = RealMatrix::identity(d + 1);
  params.value_output = RealMatrix::identity(d + 1);
  params.value_output(d, d) = 0.0;
  params.mask = RealMatrix(n + 1, n + 1);
  for (std::size_t j = 0; j < n; ++j) params.mask(n, j) = 1.0;
  return params;
}

RealMatrix attn_general(const PromptState& prompt,
                        const AttentionParams& params) {
  const RealMatrix& z = prompt.z;
  const std::size_t rows = z.rows();
  const std::size_t cols = z.cols();
  if (params.query_key.rows() != cols || params.query_key.cols() != cols) {
    throw DimensionError("attn_general: query_key must be " +
                         std::to_string(cols) + "x" + std::to_string(cols));
  }
  if (params.value_output.rows() != cols ||
      params.value_output.cols() != cols) {
    throw DimensionError("attn_general: value_output must be " +
                         std::to_string(cols) + "x" + std::to_string(cols));
  }
  if (params.mask.rows() != rows || params.mask.cols() != rows) {
    throw DimensionError("attn_general: mask must be " + std::to_string(rows) +
                         "x" + std::to_string(rows));
  }
  const RealMatrix scores = multiply(multiply(z, params.query_key),
                                     transpose(z));
  const RealMatrix masked = hadamard(params.mask, scores);
  return multiply(masked, multiply(z, params.value_output));
}

RealVector attn_closed_form(const RealMatrix& x, const RealVector& y,
                            const RealVector& q, double alpha) {
  if (x.empty()) throw DimensionError("attn_closed_form: empty matrix");
  if (y.dim() != x.rows()) {
    throw DimensionError("attn_closed_form: y dim " + std::to_string(y.dim()) +
                         " != n " + std::to_string(x.rows()));
  }
  if (q.dim() != x.cols()) {
    throw DimensionError("attn_closed_form: q dim " + std::to_string(q.dim()) +
                         " != d " + std::to_string(x.cols()));
  }
  return matvec(gram(x), q) + alpha * transpose_matvec(x, y);
}

}  // namespace looptf

#include "dadmm/block_ops.hpp"

#include "dadmm/errors.hpp"

namespace dadmm {

namespace {
void check_layout(const StackedVector& x, int n, int m, const char* what) {
  if (n < 1 || m < 1 || x.size() != static_cast<Eigen::Index>(n) * m)
    throw DimensionMismatch(std::string(what) + ": vector of length " +
                            std::to_string(x.size()) + " is not " +
                            std::to_string(n) + " blocks of " + std::to_string(m));
}
}  // namespace

Eigen::VectorXd block_mean(const StackedVector& x, int n, int m) {
  check_layout(x, n, m, "block_mean");
  Eigen::Map<const Eigen::MatrixXd> blocks(x.data(), m, n);
  return blocks.rowwise().mean();
}

StackedVector replicate_block(const Eigen::VectorXd& z, int n) {
  if (n < 1) throw DimensionMismatch("replicate_block: n must be >= 1");
  StackedVector out(z.size() * n);
  for (int i = 0; i < n; ++i) out.segment(i * z.size(), z.size()) = z;
  return out;
}

StackedVector consensus_average(const StackedVector& x, int n, int m) {
  return replicate_block(block_mean(x, n, m), n);
}

StackedVector apply_blockwise(const Eigen::MatrixXd& M, const StackedVector& x, int m) {
  const int n = static_cast<int>(M.rows());
  if (M.cols() != n) throw DimensionMismatch("apply_blockwise: mixing matrix must be square");
  check_layout(x, n, m, "apply_blockwise");
  // Blocks as columns of an m x n matrix; mixing acts on the agent axis.
  Eigen::Map<const Eigen::MatrixXd> blocks(x.data(), m, n);
  StackedVector out(x.size());
  Eigen::Map<Eigen::MatrixXd> result(out.data(), m, n);
  result.noalias() = blocks * M.transpose();
  return out;
}

}  // namespace dadmm

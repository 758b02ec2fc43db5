#pragma once

#include <Eigen/Dense>

namespace dadmm {

// A stacked decision vector holds n agent blocks of length m back to back;
// block i occupies [i*m, (i+1)*m).
using StackedVector = Eigen::VectorXd;

// Mean of the agent blocks, an m-vector.
Eigen::VectorXd block_mean(const StackedVector& x, int n, int m);

// Stacks n copies of an m-vector.
StackedVector replicate_block(const Eigen::VectorXd& z, int n);

// Projection onto the consensus set: every block replaced by the block mean.
StackedVector consensus_average(const StackedVector& x, int n, int m);

// Applies an n x n mixing matrix across agent blocks: block i of the result
// is sum_j M(i, j) * (block j of x).
StackedVector apply_blockwise(const Eigen::MatrixXd& M, const StackedVector& x, int m);

}  // namespace dadmm

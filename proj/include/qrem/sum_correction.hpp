#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrem/noise_model.hpp"

namespace qrem {

struct CorrectionResult {
    Eigen::VectorXd corrected;   // x-hat over S
    double correction_norm = 0.0;
    double achieved_sum = 0.0;   // may differ from 1 for the delta methods
};

// One tensor-product singular direction, identified by the per-block singular
// vector index. sigma and col_sum are products across blocks.
struct TensorDirection {
    std::vector<int> block_dirs;
    double sigma = 1.0;
    double col_sum = 0.0;  // 1^T v for this direction (signed)
};

// Top-k tensor singular directions ranked by |1^T v|, found by best-first
// search over per-block rank lists (never enumerates all 2^n directions).
std::vector<TensorDirection> top_directions_by_col_sum(const SvdCache& cache, int k);

// Value of direction's right singular vector at each subspace bitstring.
Eigen::VectorXd restrict_direction(const SvdCache& cache, const TensorDirection& dir,
                                   const std::vector<std::string>& subspace);

// Lagrange-multiplier solution over the k largest-|1^T v| directions. The
// element sum 1^T x is evaluated over S only, so achieved_sum can differ
// from 1; it is recorded rather than forced.
CorrectionResult delta_exact(const Eigen::VectorXd& x, const SvdCache& cache,
                             const std::vector<std::string>& subspace, int k);

// Leading-direction approximation: correction = (1 - 1^T x) / (1^T v0) * v0|_S.
CorrectionResult delta_approx(const Eigen::VectorXd& x, const SvdCache& cache,
                              const std::vector<std::string>& subspace);

// Uniform shift (1 - 1^T x)/|S|; exact minimizer of ||x-hat - x|| subject to
// the sum-one constraint.
CorrectionResult least_norm(const Eigen::VectorXd& x);

}  // namespace qrem

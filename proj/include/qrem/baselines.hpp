#pragma once

#include <Eigen/Dense>

#include "qrem/mitigator.hpp"

namespace qrem {

// Exponential-time reference: embeds y in the full 2^n vector, applies the
// exact inverse of the full tensor calibration matrix, then the least-norm
// correction (a no-op up to rounding) and SGS. Zero entries are dropped.
MitigationReport rigorous_mitigate(const SparseDistribution& y,
                                   const TensorNoiseModel& model,
                                   int cap = kDefaultFullMatrixCap);

// Variant reusing a precomputed LU of the full matrix (for experiment loops
// that mitigate many distributions under one model).
MitigationReport rigorous_mitigate(const SparseDistribution& y,
                                   const TensorNoiseModel& model,
                                   const Eigen::PartialPivLU<Eigen::MatrixXd>& lu);

// Sequential-truncation comparison method: applies each block inverse in turn
// (blocks in ascending lowest-qubit order), deleting entries with magnitude
// below the threshold t (in probability units) after each block, then runs
// the least-norm correction and SGS for comparability.
MitigationReport mooney_mitigate(const SparseDistribution& y,
                                 const TensorNoiseModel& model, double threshold,
                                 std::size_t support_cap = kDefaultSubspaceCap);

}  // namespace qrem

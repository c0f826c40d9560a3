#pragma once

#include <Eigen/Dense>

namespace qrem {

struct SgsResult {
    Eigen::VectorXd projected;          // non-negative, sum preserved
    double negative_mass_removed = 0.0; // |sum of negative values| among zeroed entries
};

// SGS negativity cancellation: zeroes entries in ascending order while the
// accumulated deficit would push the next survivor negative, then spreads the
// deficit uniformly over the survivors. For a sum-one input this is the
// Euclidean projection onto the probability simplex.
//
// Precondition: |sum(x) - 1| <= sum_tol unless sum_tol is non-finite (the
// delta correction methods legitimately hand over sums away from 1; the
// algorithm then conserves that sum instead).
SgsResult sgs_project(const Eigen::VectorXd& x, double sum_tol = 1e-6);

}  // namespace qrem

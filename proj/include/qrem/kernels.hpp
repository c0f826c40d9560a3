#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrem/noise_model.hpp"

namespace qrem {

// Precomputed lookup state for the reduced-inverse kernels: per-block inverse
// matrices (flattened row-major) and, per subspace element, the sub-index of
// that element within every block. Building this table is O(|S| * #blocks);
// afterwards each matrix entry costs one multiply per block.
struct ReductionTable {
    std::size_t size = 0;  // |S|
    std::size_t n_blocks = 0;
    std::vector<int> dims;                       // per block
    std::vector<std::vector<double>> inv_flat;   // per block, dim*dim row-major
    std::vector<std::uint16_t> sub;              // size * n_blocks
    // Per element and block, offset of the element's row inside inv_flat[b].
    std::vector<const double*> row_ptr;          // size * n_blocks

    double entry(std::size_t i, std::size_t j) const {
        const double* const* rp = row_ptr.data() + i * n_blocks;
        const std::uint16_t* sj = sub.data() + j * n_blocks;
        double p = 1.0;
        for (std::size_t b = 0; b < n_blocks; ++b) {
            p *= rp[b][sj[b]];
        }
        return p;
    }
};

ReductionTable build_reduction_table(const TensorNoiseModel& model,
                                     const std::vector<std::string>& subspace);

// Dense |S|x|S| reduced inverse. The serial variant is the reference
// implementation; the parallel variant must be bit-identical to it for any
// thread count (each row is computed wholly by one thread in fixed order).
Eigen::MatrixXd reduced_inverse_serial(const ReductionTable& table);
Eigen::MatrixXd reduced_inverse_parallel(const ReductionTable& table, int threads = 0);

struct MatrixFreeResult {
    Eigen::VectorXd x;     // (A^-1)_S y
    double one_norm = 0.0; // exact max absolute column sum of (A^-1)_S
};

// Applies the reduced inverse without materializing it; column sums for the
// exact 1-norm are accumulated in a fixed chunk order so the result does not
// depend on the thread count.
MatrixFreeResult apply_matrix_free_serial(const ReductionTable& table,
                                          const Eigen::VectorXd& y);
MatrixFreeResult apply_matrix_free_parallel(const ReductionTable& table,
                                            const Eigen::VectorXd& y, int threads = 0);

int effective_threads(int requested);

}  // namespace qrem

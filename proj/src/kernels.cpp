#include "qrem/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qrem/errors.hpp"

namespace qrem {

int effective_threads(int requested) {
#ifdef _OPENMP
    if (requested > 0) {
        return requested;
    }
    return omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

ReductionTable build_reduction_table(const TensorNoiseModel& model,
                                     const std::vector<std::string>& subspace) {
    validate_model(model);
    if (subspace.empty()) {
        throw InputError("reduction table: empty subspace");
    }
    ReductionTable t;
    t.size = subspace.size();
    t.n_blocks = model.blocks.size();
    const auto inverses = block_inverses(model);
    for (std::size_t b = 0; b < t.n_blocks; ++b) {
        const int dim = static_cast<int>(inverses[b].rows());
        t.dims.push_back(dim);
        std::vector<double> flat(static_cast<std::size_t>(dim) * dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                flat[static_cast<std::size_t>(r) * dim + c] = inverses[b](r, c);
            }
        }
        t.inv_flat.push_back(std::move(flat));
    }
    t.sub.resize(t.size * t.n_blocks);
    t.row_ptr.resize(t.size * t.n_blocks);
    for (std::size_t e = 0; e < t.size; ++e) {
        const std::string& bits = subspace[e];
        if (static_cast<int>(bits.size()) != model.width) {
            throw InputError("subspace bitstring width does not match model width");
        }
        for (std::size_t b = 0; b < t.n_blocks; ++b) {
            const int s = sub_index(bits, model.blocks[b].qubits);
            t.sub[e * t.n_blocks + b] = static_cast<std::uint16_t>(s);
            t.row_ptr[e * t.n_blocks + b] =
                t.inv_flat[b].data() + static_cast<std::size_t>(s) * t.dims[b];
        }
    }
    return t;
}

namespace {

Eigen::MatrixXd reduced_inverse_impl(const ReductionTable& t, int threads) {
    const std::int64_t n = static_cast<std::int64_t>(t.size);
    Eigen::MatrixXd out(n, n);
#pragma omp parallel for schedule(static) num_threads(effective_threads(threads))
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < n; ++j) {
            out(i, j) = t.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    return out;
}

// Rows are processed in fixed-size chunks; per-chunk column-sum partials are
// combined in chunk order so the 1-norm is identical for any thread count.
MatrixFreeResult matrix_free_impl(const ReductionTable& t, const Eigen::VectorXd& y,
                                  int threads) {
    const std::size_t n = t.size;
    if (static_cast<std::size_t>(y.size()) != n) {
        throw InputError("matrix-free apply: vector size does not match subspace");
    }
    std::size_t chunk_rows = 64;
    while ((n + chunk_rows - 1) / chunk_rows > 256) {
        chunk_rows *= 2;
    }
    const std::size_t n_chunks = (n + chunk_rows - 1) / chunk_rows;

    MatrixFreeResult res;
    res.x = Eigen::VectorXd::Zero(static_cast<std::int64_t>(n));
    std::vector<Eigen::VectorXd> partial(n_chunks);

#pragma omp parallel for schedule(dynamic, 1) num_threads(effective_threads(threads))
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
        const std::size_t row_begin = static_cast<std::size_t>(c) * chunk_rows;
        const std::size_t row_end = std::min(n, row_begin + chunk_rows);
        Eigen::VectorXd cols = Eigen::VectorXd::Zero(static_cast<std::int64_t>(n));
        for (std::size_t i = row_begin; i < row_end; ++i) {
            const double* const* rp = t.row_ptr.data() + i * t.n_blocks;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const std::uint16_t* sj = t.sub.data() + j * t.n_blocks;
                double p = 1.0;
                for (std::size_t b = 0; b < t.n_blocks; ++b) {
                    p *= rp[b][sj[b]];
                }
                acc += p * y(static_cast<std::int64_t>(j));
                cols(static_cast<std::int64_t>(j)) += std::abs(p);
            }
            res.x(static_cast<std::int64_t>(i)) = acc;
        }
        partial[static_cast<std::size_t>(c)] = std::move(cols);
    }

    Eigen::VectorXd col_sums = Eigen::VectorXd::Zero(static_cast<std::int64_t>(n));
    for (std::size_t c = 0; c < n_chunks; ++c) {
        col_sums += partial[c];
    }
    res.one_norm = col_sums.maxCoeff();
    return res;
}

}  // namespace

Eigen::MatrixXd reduced_inverse_serial(const ReductionTable& table) {
    return reduced_inverse_impl(table, 1);
}

Eigen::MatrixXd reduced_inverse_parallel(const ReductionTable& table, int threads) {
    return reduced_inverse_impl(table, threads);
}

MatrixFreeResult apply_matrix_free_serial(const ReductionTable& table,
                                          const Eigen::VectorXd& y) {
    return matrix_free_impl(table, y, 1);
}

MatrixFreeResult apply_matrix_free_parallel(const ReductionTable& table,
                                            const Eigen::VectorXd& y, int threads) {
    return matrix_free_impl(table, y, threads);
}

}  // namespace qrem

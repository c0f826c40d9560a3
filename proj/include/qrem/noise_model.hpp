#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrem/errors.hpp"

namespace qrem {

// Column-stochastic calibration matrix of one qubit block. Entry (i, j) is the
// probability of reading block-state i when block-state j was prepared.
struct LocalCalibration {
    std::vector<int> qubits;  // ascending; first qubit is the most significant sub-bit
    Eigen::MatrixXd matrix;   // 2^k x 2^k
};

struct TensorNoiseModel {
    int width = 0;
    std::vector<LocalCalibration> blocks;
};

// Per-block SVD quantities used by the delta correction. Singular values are
// descending; right singular vectors are oriented so their element sum is
// non-negative (ties keep the first nonzero entry positive).
struct BlockSvd {
    Eigen::VectorXd sigma;
    Eigen::MatrixXd u;
    Eigen::MatrixXd v;
    Eigen::VectorXd v_col_sums;  // 1^T v_i per column i
};

struct SvdCache {
    int width = 0;
    std::vector<std::vector<int>> qubits;  // per block, same order as blocks
    std::vector<BlockSvd> blocks;
};

inline constexpr int kMaxBlockSize = 6;
inline constexpr int kDefaultFullMatrixCap = 14;

// Throws on invalid block structure, non-stochastic columns, or singular blocks.
void validate_model(const TensorNoiseModel& model);

// n single-qubit blocks [[1-p10, p01], [p10, 1-p01]].
TensorNoiseModel synth_uniform(int n, double p01, double p10);

// Kronecker product of block matrices in qubit order; guarded by a size cap.
Eigen::MatrixXd full_matrix(const TensorNoiseModel& model, int cap = kDefaultFullMatrixCap);

SvdCache svd_cache(const TensorNoiseModel& model);

// Per-block inverse calibration matrices (closed-form for 2x2, LU above).
std::vector<Eigen::MatrixXd> block_inverses(const TensorNoiseModel& model);

// Sub-index of `bits` within a block: bit of qubits[0] is the most significant.
int sub_index(const std::string& bits, const std::vector<int>& qubits);

// ||A^-1||_1 over the full space, via 1-norm multiplicativity across blocks.
double full_inverse_one_norm(const TensorNoiseModel& model);

// Calibration JSON: {"width": n, "blocks": [{"qubits": [...], "matrix": [[...], ...]}]}.
// Columns deviating from sum 1 by more than 1e-6 trigger a warning on stderr;
// columns are renormalized on load.
TensorNoiseModel load_model(const std::string& path);
void save_model(const TensorNoiseModel& model, const std::string& path);
TensorNoiseModel model_from_json_string(const std::string& text);
std::string model_to_json_string(const TensorNoiseModel& model, int indent = 2);

}  // namespace qrem

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrem/distribution.hpp"
#include "qrem/kernels.hpp"
#include "qrem/noise_model.hpp"

namespace qrem {

inline constexpr std::size_t kDefaultSubspaceCap = std::size_t{1} << 20;
// Explicit-matrix mode additionally requires |S|^2 to stay below this.
inline constexpr std::size_t kDefaultMatrixEntryCap = std::size_t{1} << 30;

struct ReducedInverse {
    std::vector<std::string> subspace;  // canonical order
    Eigen::MatrixXd matrix;             // |S| x |S|
    double one_norm = 0.0;
};

enum class CorrectionMethod {
    kDelta,       // leading-direction approximation (Approach 1)
    kDeltaExact,  // k-direction Lagrange solution
    kLeastNorm,   // Approach 2
};

struct MitigateOptions {
    CorrectionMethod method = CorrectionMethod::kLeastNorm;
    int delta_k = 1;          // directions for kDeltaExact
    int hamming_radius = 0;   // subspace extension; 0 = measured subspace only
    bool matrix_free = false;
    int threads = 0;          // 0 = all available
    std::size_t subspace_cap = kDefaultSubspaceCap;
    std::size_t matrix_entry_cap = kDefaultMatrixEntryCap;
};

struct StepTimings {
    double step1 = 0.0;  // seconds
    double step2 = 0.0;
    double step3 = 0.0;
    double total = 0.0;
};

struct MitigationReport {
    SparseDistribution mitigated;
    double overhead = 1.0;              // M = ||(A^-1)_S||_1^2
    double sigma = 0.0;                 // sqrt(M / shots); 0 when shots unknown
    double pre_correction_sum = 0.0;    // 1^T x_S after Step 1
    double achieved_sum = 0.0;          // 1^T x-hat after Step 2
    double negative_mass_removed = 0.0;
    std::string method;
    StepTimings elapsed;
};

ReducedInverse reduced_inverse(const TensorNoiseModel& model,
                               const std::vector<std::string>& subspace,
                               int threads = 0);

// Eq.-(3) route: same result as reduced_inverse followed by a matrix-vector
// product, but O(|S|) memory.
MatrixFreeResult apply_inverse_matrix_free(const TensorNoiseModel& model,
                                           const SparseDistribution& y,
                                           int threads = 0);

// Union of Hamming balls of radius d around S, canonically ordered.
std::vector<std::string> extend_subspace(const std::vector<std::string>& subspace,
                                         int radius,
                                         std::size_t cap = kDefaultSubspaceCap);

double mitigation_overhead(const ReducedInverse& r);
double error_bound(double overhead, std::uint64_t shots);

// Full three-step pipeline.
MitigationReport mitigate(const SparseDistribution& y, const TensorNoiseModel& model,
                          const MitigateOptions& options = {});

const char* correction_method_name(CorrectionMethod m);

}  // namespace qrem

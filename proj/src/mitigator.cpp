#include "qrem/mitigator.hpp"

#include <chrono>
#include <cmath>
#include <set>

#include "qrem/simplex.hpp"
#include "qrem/sum_correction.hpp"

namespace qrem {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::VectorXd weights_vector(const SparseDistribution& y,
                               const std::vector<std::string>& subspace) {
    Eigen::VectorXd v(static_cast<std::int64_t>(subspace.size()));
    for (std::size_t i = 0; i < subspace.size(); ++i) {
        v(static_cast<std::int64_t>(i)) = y.at(subspace[i]);
    }
    return v;
}

}  // namespace

const char* correction_method_name(CorrectionMethod m) {
    switch (m) {
        case CorrectionMethod::kDelta:
            return "delta";
        case CorrectionMethod::kDeltaExact:
            return "delta-exact";
        case CorrectionMethod::kLeastNorm:
            return "least-norm";
    }
    return "unknown";
}

ReducedInverse reduced_inverse(const TensorNoiseModel& model,
                               const std::vector<std::string>& subspace, int threads) {
    ReducedInverse r;
    r.subspace = subspace;
    const auto table = build_reduction_table(model, subspace);
    r.matrix = reduced_inverse_parallel(table, threads);
    r.one_norm = r.matrix.cwiseAbs().colwise().sum().maxCoeff();
    return r;
}

MatrixFreeResult apply_inverse_matrix_free(const TensorNoiseModel& model,
                                           const SparseDistribution& y, int threads) {
    if (y.entries.empty()) {
        throw InputError("apply_inverse_matrix_free: empty distribution");
    }
    if (y.width != model.width) {
        throw InputError("distribution width does not match model width");
    }
    const auto subspace = y.subspace();
    const auto table = build_reduction_table(model, subspace);
    return apply_matrix_free_parallel(table, weights_vector(y, subspace), threads);
}

std::vector<std::string> extend_subspace(const std::vector<std::string>& subspace,
                                         int radius, std::size_t cap) {
    if (radius < 0) {
        throw InputError("extend_subspace: radius must be >= 0");
    }
    std::set<std::string> out(subspace.begin(), subspace.end());
    std::set<std::string> frontier = out;
    for (int d = 0; d < radius; ++d) {
        std::set<std::string> next;
        for (const auto& bits : frontier) {
            for (std::size_t i = 0; i < bits.size(); ++i) {
                std::string flipped = bits;
                flipped[i] = flipped[i] == '0' ? '1' : '0';
                if (out.insert(flipped).second) {
                    next.insert(std::move(flipped));
                }
                if (out.size() > cap) {
                    throw CapError("extend_subspace: extended subspace exceeds cap " +
                                   std::to_string(cap));
                }
            }
        }
        frontier = std::move(next);
    }
    return {out.begin(), out.end()};
}

double mitigation_overhead(const ReducedInverse& r) {
    return r.one_norm * r.one_norm;
}

double error_bound(double overhead, std::uint64_t shots) {
    if (shots == 0) {
        throw InputError("error_bound: shot count must be >= 1");
    }
    return std::sqrt(overhead / static_cast<double>(shots));
}

MitigationReport mitigate(const SparseDistribution& y, const TensorNoiseModel& model,
                          const MitigateOptions& options) {
    if (y.entries.empty()) {
        throw InputError("mitigate: empty distribution");
    }
    if (y.width != model.width) {
        throw InputError("distribution width does not match model width");
    }
    const auto t_start = std::chrono::steady_clock::now();

    auto subspace = y.subspace();
    if (options.hamming_radius > 0) {
        subspace = extend_subspace(subspace, options.hamming_radius, options.subspace_cap);
    }
    if (subspace.size() > options.subspace_cap) {
        throw CapError("mitigate: subspace size exceeds cap");
    }

    // Counts-valued inputs are normalized to probabilities first.
    Eigen::VectorXd yv = weights_vector(y, subspace);
    const double ysum = yv.sum();
    if (!y.probability && ysum > 0.0) {
        yv /= ysum;
    }

    MitigationReport report;
    report.method = correction_method_name(options.method);

    // Step 1: reduced inverse application and exact 1-norm.
    const auto t1 = std::chrono::steady_clock::now();
    Eigen::VectorXd x;
    double one_norm = 0.0;
    const bool use_matrix_free =
        options.matrix_free ||
        subspace.size() * subspace.size() > options.matrix_entry_cap;
    if (use_matrix_free) {
        const auto table = build_reduction_table(model, subspace);
        auto mf = apply_matrix_free_parallel(table, yv, options.threads);
        x = std::move(mf.x);
        one_norm = mf.one_norm;
    } else {
        const auto r = reduced_inverse(model, subspace, options.threads);
        x = r.matrix * yv;
        one_norm = r.one_norm;
    }
    report.overhead = one_norm * one_norm;
    report.sigma = y.total_shots > 0 ? error_bound(report.overhead, y.total_shots) : 0.0;
    report.pre_correction_sum = x.sum();
    report.elapsed.step1 = seconds_since(t1);

    // Step 2: sum-to-one correction.
    const auto t2 = std::chrono::steady_clock::now();
    CorrectionResult corr;
    switch (options.method) {
        case CorrectionMethod::kLeastNorm:
            corr = least_norm(x);
            break;
        case CorrectionMethod::kDelta: {
            const auto cache = svd_cache(model);
            corr = delta_approx(x, cache, subspace);
            break;
        }
        case CorrectionMethod::kDeltaExact: {
            const auto cache = svd_cache(model);
            corr = delta_exact(x, cache, subspace, options.delta_k);
            break;
        }
    }
    report.achieved_sum = corr.achieved_sum;
    report.elapsed.step2 = seconds_since(t2);

    // Step 3: negativity cancellation. The delta methods may hand over a sum
    // away from 1; SGS then conserves that sum, so the tolerance is lifted.
    const auto t3 = std::chrono::steady_clock::now();
    const double sgs_tol = options.method == CorrectionMethod::kLeastNorm
                               ? 1e-6
                               : std::numeric_limits<double>::infinity();
    auto sgs = sgs_project(corr.corrected, sgs_tol);
    report.negative_mass_removed = sgs.negative_mass_removed;
    report.elapsed.step3 = seconds_since(t3);

    report.mitigated.width = y.width;
    report.mitigated.total_shots = y.total_shots;
    report.mitigated.probability = true;
    for (std::size_t i = 0; i < subspace.size(); ++i) {
        const double w = sgs.projected(static_cast<std::int64_t>(i));
        if (w != 0.0) {
            report.mitigated.entries[subspace[i]] = w;
        }
    }
    report.elapsed.total = seconds_since(t_start);
    return report;
}

}  // namespace qrem

#include "qrem/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "qrem/simplex.hpp"
#include "qrem/sum_correction.hpp"

namespace qrem {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string index_to_bits(std::size_t idx, int width) {
    std::string bits(static_cast<std::size_t>(width), '0');
    for (int q = 0; q < width; ++q) {
        if ((idx >> (width - 1 - q)) & 1u) {
            bits[static_cast<std::size_t>(q)] = '1';
        }
    }
    return bits;
}

MitigationReport finish_report(const SparseDistribution& y, Eigen::VectorXd x,
                               const std::vector<std::string>& labels,
                               const std::string& method, double one_norm,
                               std::chrono::steady_clock::time_point t0) {
    MitigationReport report;
    report.method = method;
    report.overhead = one_norm * one_norm;
    report.sigma = y.total_shots > 0 ? error_bound(report.overhead, y.total_shots) : 0.0;
    report.pre_correction_sum = x.sum();

    auto corr = least_norm(x);
    report.achieved_sum = corr.achieved_sum;
    auto sgs = sgs_project(corr.corrected);
    report.negative_mass_removed = sgs.negative_mass_removed;

    report.mitigated.width = y.width;
    report.mitigated.total_shots = y.total_shots;
    report.mitigated.probability = true;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double w = sgs.projected(static_cast<std::int64_t>(i));
        if (w != 0.0) {
            report.mitigated.entries[labels[i]] = w;
        }
    }
    report.elapsed.total = seconds_since(t0);
    return report;
}

}  // namespace

MitigationReport rigorous_mitigate(const SparseDistribution& y,
                                   const TensorNoiseModel& model,
                                   const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
    const auto t0 = std::chrono::steady_clock::now();
    if (y.width != model.width) {
        throw InputError("distribution width does not match model width");
    }
    const std::size_t dim = std::size_t{1} << model.width;
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<std::int64_t>(dim));
    std::vector<std::string> labels(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        labels[i] = index_to_bits(i, model.width);
    }
    double ysum = 0.0;
    for (const auto& [bits, w] : y.entries) {
        ysum += w;
    }
    for (const auto& [bits, w] : y.entries) {
        std::size_t idx = 0;
        for (char c : bits) {
            idx = (idx << 1) | (c == '1' ? 1u : 0u);
        }
        full(static_cast<std::int64_t>(idx)) = y.probability ? w : w / ysum;
    }
    Eigen::VectorXd x = lu.solve(full);
    return finish_report(y, std::move(x), labels, "rigorous", full_inverse_one_norm(model), t0);
}

MitigationReport rigorous_mitigate(const SparseDistribution& y,
                                   const TensorNoiseModel& model, int cap) {
    if (model.width > cap) {
        throw CapError("rigorous_mitigate: width " + std::to_string(model.width) +
                       " exceeds cap " + std::to_string(cap));
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(full_matrix(model, cap));
    return rigorous_mitigate(y, model, lu);
}

MitigationReport mooney_mitigate(const SparseDistribution& y,
                                 const TensorNoiseModel& model, double threshold,
                                 std::size_t support_cap) {
    const auto t0 = std::chrono::steady_clock::now();
    if (y.width != model.width) {
        throw InputError("distribution width does not match model width");
    }
    if (!(threshold >= 0.0 && threshold < 1.0)) {
        throw InputError("mooney_mitigate: threshold must lie in [0, 1)");
    }
    validate_model(model);
    const auto inverses = block_inverses(model);

    std::map<std::string, double> current;
    const double ysum = y.sum();
    for (const auto& [bits, w] : y.entries) {
        current[bits] = y.probability ? w : w / ysum;
    }

    // Blocks in ascending lowest-qubit order; the order affects intermediate
    // truncation and is fixed for reproducibility.
    std::vector<std::size_t> order(model.blocks.size());
    for (std::size_t b = 0; b < order.size(); ++b) {
        order[b] = b;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return model.blocks[a].qubits.front() < model.blocks[b].qubits.front();
    });

    for (std::size_t b : order) {
        const auto& qubits = model.blocks[b].qubits;
        const auto& inv = inverses[b];
        const int dim = static_cast<int>(inv.rows());
        std::map<std::string, double> next;
        for (const auto& [bits, w] : current) {
            const int j = sub_index(bits, qubits);
            for (int i = 0; i < dim; ++i) {
                const double v = inv(i, j) * w;
                if (v == 0.0) {
                    continue;
                }
                std::string target = bits;
                for (std::size_t q = 0; q < qubits.size(); ++q) {
                    const int bit = (i >> (qubits.size() - 1 - q)) & 1;
                    target[static_cast<std::size_t>(qubits[q])] = bit ? '1' : '0';
                }
                next[target] += v;
            }
            if (next.size() > support_cap) {
                throw CapError("mooney_mitigate: intermediate support exceeds cap " +
                               std::to_string(support_cap));
            }
        }
        if (threshold > 0.0) {
            for (auto it = next.begin(); it != next.end();) {
                if (std::abs(it->second) < threshold) {
                    it = next.erase(it);
                } else {
                    ++it;
                }
            }
        }
        if (next.empty()) {
            throw DegenerateError("mooney_mitigate: truncation removed every entry");
        }
        current = std::move(next);
    }

    std::vector<std::string> labels;
    labels.reserve(current.size());
    Eigen::VectorXd x(static_cast<std::int64_t>(current.size()));
    std::int64_t i = 0;
    for (const auto& [bits, w] : current) {
        labels.push_back(bits);
        x(i++) = w;
    }
    auto report = finish_report(y, std::move(x), labels, "mooney", full_inverse_one_norm(model), t0);
    return report;
}

}  // namespace qrem

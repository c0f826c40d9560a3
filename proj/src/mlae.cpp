#include "qrem/mlae.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "qrem/baselines.hpp"
#include "qrem/sim.hpp"

namespace qrem {

namespace {

constexpr double kProbClamp = 1e-12;
// For integer schedules cos^2(2m(pi/2 - theta)) = cos^2(2m theta), so the
// likelihood is exactly symmetric about pi/4 and only (0, pi/4] (amplitude
// <= 1/2) is identifiable.
constexpr double kQuarterPi = 0.7853981633974483;

double clamped_log(double p) {
    return std::log(std::min(1.0 - kProbClamp, std::max(kProbClamp, p)));
}

// Golden-section maximization on [lo, hi].
double golden_refine(const std::vector<MlaeObservation>& obs, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = log_likelihood(c, obs);
    double fd = log_likelihood(d, obs);
    while (b - a > 1e-12) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = log_likelihood(c, obs);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = log_likelihood(d, obs);
        }
    }
    return (a + b) / 2.0;
}

}  // namespace

double log_likelihood(double theta, const std::vector<MlaeObservation>& observations) {
    double ll = 0.0;
    for (const auto& o : observations) {
        const double c = std::cos(2.0 * o.iterations * theta);
        const double p = c * c;
        ll += o.zero_weight * clamped_log(p) + (o.total - o.zero_weight) * clamped_log(1.0 - p);
    }
    return ll;
}

std::vector<MlaeResult> mle_theta(const std::vector<MlaeObservation>& observations,
                                  std::uint64_t shots_per_circuit, double theta_true,
                                  int grid_points) {
    if (observations.empty()) {
        throw InputError("mle_theta: no observations");
    }
    std::vector<MlaeResult> results;
    std::vector<MlaeObservation> prefix;
    std::uint64_t queries = 0;
    for (const auto& o : observations) {
        prefix.push_back(o);
        queries += shots_per_circuit * static_cast<std::uint64_t>(o.iterations);

        bool all_zero = true;
        for (const auto& p : prefix) {
            if (p.zero_weight > 0.0) {
                all_zero = false;
                break;
            }
        }
        if (all_zero) {
            std::cerr << "warning: degenerate likelihood (all-zero observations); "
                         "returning boundary estimate\n";
        }

        const double step = kQuarterPi / (grid_points + 1);
        double best_theta = step;
        double best_ll = -std::numeric_limits<double>::infinity();
        for (int g = 1; g <= grid_points; ++g) {
            const double theta = g * step;
            const double ll = log_likelihood(theta, prefix);
            if (ll > best_ll) {
                best_ll = ll;
                best_theta = theta;
            }
        }
        const double lo = std::max(kProbClamp, best_theta - step);
        const double hi = std::min(kQuarterPi, best_theta + step);
        const double theta_hat = golden_refine(prefix, lo, hi);

        MlaeResult r;
        r.theta_hat = theta_hat;
        r.amplitude_hat = std::sin(theta_hat) * std::sin(theta_hat);
        r.theta_error = theta_true >= 0.0 ? std::abs(theta_hat - theta_true) : 0.0;
        r.queries = queries;
        results.push_back(r);
    }
    return results;
}

double heisenberg_reference(double c, double n_q) {
    return c / n_q;
}

MitigationMethod parse_mitigation_method(const std::string& name, double* mooney_threshold) {
    if (name == "raw" || name == "none") {
        return MitigationMethod::kRaw;
    }
    if (name == "proposed-least-norm" || name == "least-norm") {
        return MitigationMethod::kProposedLeastNorm;
    }
    if (name == "proposed-delta" || name == "delta") {
        return MitigationMethod::kProposedDelta;
    }
    if (name == "rigorous") {
        return MitigationMethod::kRigorous;
    }
    if (name.rfind("mooney", 0) == 0) {
        if (name.size() > 7 && name[6] == ':' && mooney_threshold != nullptr) {
            *mooney_threshold = std::stod(name.substr(7));
        }
        return MitigationMethod::kMooney;
    }
    throw InputError("unknown mitigation method: " + name);
}

MlaeExperimentReport run_experiment(const MlaeExperimentConfig& config) {
    if (config.trials < 1) {
        throw InputError("run_experiment: trials must be >= 1");
    }
    const auto& schedule = config.schedule.iterations;
    for (std::size_t k = 0; k + 1 < schedule.size(); ++k) {
        if (schedule[k] < 1 || schedule[k + 1] <= schedule[k]) {
            throw InputError("run_experiment: schedule must be strictly increasing, >= 1");
        }
    }

    MlaeExperimentReport report;
    report.config = config;
    const auto target = target_amplitude(config.n, config.b_max);
    report.theta_true = target.theta;
    report.amplitude_true = target.discrete;

    const int width = config.n + 1;
    TensorNoiseModel model;
    const bool noisy = config.noise_p > 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> rigorous_lu;
    if (noisy || config.method != MitigationMethod::kRaw) {
        model = synth_uniform(width, config.noise_p, config.noise_p);
        if (config.method == MitigationMethod::kRigorous) {
            rigorous_lu.compute(full_matrix(model));
        }
    }

    const std::size_t n_prefix = schedule.size();
    report.prefixes.resize(n_prefix);
    std::vector<std::vector<double>> amp_errors(
        static_cast<std::size_t>(config.trials));

    for (int trial = 0; trial < config.trials; ++trial) {
        std::vector<MlaeObservation> observations;
        for (std::size_t k = 0; k < n_prefix; ++k) {
            const int m = schedule[k];
            auto ideal = grover_ideal(config.n, m, target.theta, config.residual_support,
                                      config.seed);
            auto measured = noisy ? apply_noise_exact(ideal, model) : ideal;
            auto sampled = sample_counts(
                measured, config.schedule.shots_per_circuit,
                mix_seed({config.seed, static_cast<std::uint64_t>(m),
                          static_cast<std::uint64_t>(trial)}));

            double zero_prob = 0.0;
            const std::string zeros(static_cast<std::size_t>(width), '0');
            switch (config.method) {
                case MitigationMethod::kRaw:
                    zero_prob = sampled.at(zeros);
                    break;
                case MitigationMethod::kProposedLeastNorm: {
                    MitigateOptions opt;
                    opt.method = CorrectionMethod::kLeastNorm;
                    opt.threads = config.threads;
                    zero_prob = mitigate(sampled, model, opt).mitigated.at(zeros);
                    break;
                }
                case MitigationMethod::kProposedDelta: {
                    MitigateOptions opt;
                    opt.method = CorrectionMethod::kDelta;
                    opt.threads = config.threads;
                    zero_prob = mitigate(sampled, model, opt).mitigated.at(zeros);
                    break;
                }
                case MitigationMethod::kRigorous:
                    zero_prob = rigorous_mitigate(sampled, model, rigorous_lu).mitigated.at(zeros);
                    break;
                case MitigationMethod::kMooney:
                    zero_prob = mooney_mitigate(sampled, model, config.mooney_threshold)
                                    .mitigated.at(zeros);
                    break;
            }

            MlaeObservation o;
            o.iterations = m;
            o.total = static_cast<double>(config.schedule.shots_per_circuit);
            o.zero_weight = zero_prob * o.total;
            observations.push_back(o);

            report.prefixes[k].mean_zero_count += o.zero_weight / config.trials;
            const double c = std::cos(2.0 * m * target.theta);
            report.prefixes[k].ideal_zero_count = c * c * o.total;
        }

        auto results = mle_theta(observations, config.schedule.shots_per_circuit,
                                 target.theta);
        std::vector<double> errs;
        for (std::size_t k = 0; k < n_prefix; ++k) {
            errs.push_back(results[k].theta_error);
            amp_errors[static_cast<std::size_t>(trial)].push_back(
                std::abs(results[k].amplitude_hat - target.discrete));
            report.prefixes[k].iterations_last = schedule[k];
            report.prefixes[k].queries = results[k].queries;
        }
        report.per_trial_errors.push_back(std::move(errs));
    }

    for (std::size_t k = 0; k < n_prefix; ++k) {
        double mean = 0.0;
        double mean_amp = 0.0;
        for (int t = 0; t < config.trials; ++t) {
            mean += report.per_trial_errors[static_cast<std::size_t>(t)][k];
            mean_amp += amp_errors[static_cast<std::size_t>(t)][k];
        }
        mean /= config.trials;
        mean_amp /= config.trials;
        double var = 0.0;
        for (int t = 0; t < config.trials; ++t) {
            const double d = report.per_trial_errors[static_cast<std::size_t>(t)][k] - mean;
            var += d * d;
        }
        report.prefixes[k].mean_theta_error = mean;
        report.prefixes[k].mean_amplitude_error = mean_amp;
        report.prefixes[k].std_theta_error =
            config.trials > 1 ? std::sqrt(var / (config.trials - 1)) : 0.0;
    }
    report.heisenberg_c = report.prefixes.front().mean_theta_error *
                          static_cast<double>(report.prefixes.front().queries);
    return report;
}

}  // namespace qrem

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrem/mitigator.hpp"

namespace qrem {

// One schedule step: h of the total weight w landed on the all-zeros string
// after m Grover iterations. h may be fractional (mitigated quasi-count).
struct MlaeObservation {
    int iterations = 1;      // m
    double zero_weight = 0;  // h
    double total = 0;        // w (shot count)
};

struct MlaeSchedule {
    std::vector<int> iterations = {1, 2, 4, 8, 16, 32, 64};
    std::uint64_t shots_per_circuit = 100;
};

struct MlaeResult {
    double theta_hat = 0.0;
    double amplitude_hat = 0.0;  // sin^2(theta_hat)
    double theta_error = 0.0;    // |theta_hat - theta_true|, 0 if truth unknown
    std::uint64_t queries = 0;   // N_q = N_shot * sum of m over the prefix
};

// Binomial log-likelihood of cos^2(2 m theta) outcomes, probability clamped
// to [1e-12, 1 - 1e-12].
double log_likelihood(double theta, const std::vector<MlaeObservation>& observations);

// Grid search (default 1e5 points) followed by golden-section refinement; one
// result per schedule prefix. The search domain is (0, pi/4] — for integer
// schedules the likelihood is exactly symmetric under theta -> pi/2 - theta,
// so only amplitudes <= 1/2 are identifiable.
std::vector<MlaeResult> mle_theta(const std::vector<MlaeObservation>& observations,
                                  std::uint64_t shots_per_circuit,
                                  double theta_true = -1.0, int grid_points = 100000);

// Reference curve c / N_q; c is pinned from a reference point, not fitted.
double heisenberg_reference(double c, double n_q);

enum class MitigationMethod {
    kRaw,
    kProposedLeastNorm,
    kProposedDelta,
    kRigorous,
    kMooney,
};

MitigationMethod parse_mitigation_method(const std::string& name, double* mooney_threshold);

struct MlaeExperimentConfig {
    int n = 10;
    double b_max = 0.5;
    MlaeSchedule schedule;
    double noise_p = 0.0;       // symmetric readout flip probability
    MitigationMethod method = MitigationMethod::kRaw;
    double mooney_threshold = 0.01;
    int trials = 10;
    std::uint64_t seed = 1;
    int residual_support = 64;
    int threads = 0;
};

struct MlaePrefixStats {
    int iterations_last = 0;     // m of the final step in this prefix
    std::uint64_t queries = 0;   // cumulative N_q
    double mean_theta_error = 0.0;
    double std_theta_error = 0.0;
    double mean_amplitude_error = 0.0;
    double mean_zero_count = 0.0;  // mitigated all-zeros quasi-count at this step
    double ideal_zero_count = 0.0; // N_shot * cos^2(2 m theta)
};

struct MlaeExperimentReport {
    MlaeExperimentConfig config;
    double theta_true = 0.0;
    double amplitude_true = 0.0;
    double heisenberg_c = 0.0;  // from the first prefix point
    std::vector<MlaePrefixStats> prefixes;
    std::vector<std::vector<double>> per_trial_errors;  // [trial][prefix]
};

MlaeExperimentReport run_experiment(const MlaeExperimentConfig& config);

}  // namespace qrem

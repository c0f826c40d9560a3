#pragma once

#include <cstdint>
#include <vector>

#include "qrem/distribution.hpp"
#include "qrem/noise_model.hpp"
#include "qrem/observables.hpp"

namespace qrem {

// Deterministic key mixing for reproducible, parallelizable sampling grids.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words);

// Ideal GHZ outcome distribution: half weight on all-zeros, half on all-ones.
SparseDistribution ghz_ideal(int n);

// Forward noise channel A * p, applied block-by-block on the sparse support.
// Entries below 1e-12 are truncated; exceeding the support cap is an error.
SparseDistribution apply_noise_exact(const SparseDistribution& p,
                                     const TensorNoiseModel& model,
                                     std::size_t support_cap = std::size_t{1} << 20);

// Multinomial draw of `shots` samples, reproducible by seed.
SparseDistribution sample_counts(const SparseDistribution& p, std::uint64_t shots,
                                 std::uint64_t seed);

// Ideal GHZ overlap signals S_phi = cos^2(n phi / 2) on the uniform grid
// phi_j = 2 pi j / n_angles.
MqcSignalSet mqc_ideal_signals(int n, int n_angles);

// Peaked outcome model shared by the Grover and MQC simulations: the all-zeros
// string carries `zero_weight`; the residual is spread uniformly over
// `residual_support` fixed pseudo-random nonzero strings whose last bit is 1.
SparseDistribution peaked_distribution(int width, double zero_weight,
                                       int residual_support, std::uint64_t key);

// Outcome distribution of m modified-Grover iterations: the (n+1)-bit
// all-zeros string has weight cos^2(2 m theta). The residual support depends
// on (seed, n) only, so every m shares the same residual states.
SparseDistribution grover_ideal(int n, int m, double theta, int residual_support,
                                std::uint64_t seed);

struct AmplitudeTarget {
    double integral = 0.0;   // continuous target I
    double discrete = 0.0;   // midpoint-discretized S
    double theta = 0.0;      // arcsin(sqrt(S))
};

// Monte Carlo integration target of sin^2 over [0, b_max] with uniform p(x).
AmplitudeTarget target_amplitude(int n, double b_max);

}  // namespace qrem

#include "qrem/sim.hpp"

#include <cmath>
#include <random>
#include <set>

namespace qrem {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) {
    std::uint64_t state = 0x2545f4914f6cdd1dULL;
    std::uint64_t out = 0;
    for (std::uint64_t w : words) {
        state ^= w;
        out = splitmix64(state);
    }
    return out;
}

SparseDistribution ghz_ideal(int n) {
    if (n < 2) {
        throw InputError("ghz_ideal: n must be >= 2");
    }
    SparseDistribution d;
    d.width = n;
    d.probability = true;
    d.entries[std::string(static_cast<std::size_t>(n), '0')] = 0.5;
    d.entries[std::string(static_cast<std::size_t>(n), '1')] = 0.5;
    return d;
}

SparseDistribution apply_noise_exact(const SparseDistribution& p,
                                     const TensorNoiseModel& model,
                                     std::size_t support_cap) {
    if (p.width != model.width) {
        throw InputError("apply_noise_exact: width mismatch");
    }
    validate_model(model);
    std::map<std::string, double> current(p.entries.begin(), p.entries.end());
    for (const auto& block : model.blocks) {
        const int dim = 1 << static_cast<int>(block.qubits.size());
        std::map<std::string, double> next;
        for (const auto& [bits, w] : current) {
            const int j = sub_index(bits, block.qubits);
            for (int i = 0; i < dim; ++i) {
                const double v = block.matrix(i, j) * w;
                if (std::abs(v) < 1e-12) {
                    continue;
                }
                std::string target = bits;
                for (std::size_t q = 0; q < block.qubits.size(); ++q) {
                    const int bit = (i >> (block.qubits.size() - 1 - q)) & 1;
                    target[static_cast<std::size_t>(block.qubits[q])] = bit ? '1' : '0';
                }
                next[target] += v;
            }
            if (next.size() > support_cap) {
                throw CapError("apply_noise_exact: support exceeds cap " +
                               std::to_string(support_cap));
            }
        }
        current = std::move(next);
    }
    SparseDistribution out;
    out.width = p.width;
    out.total_shots = p.total_shots;
    out.probability = true;
    out.entries = std::move(current);
    return out;
}

SparseDistribution sample_counts(const SparseDistribution& p, std::uint64_t shots,
                                 std::uint64_t seed) {
    if (shots < 1) {
        throw InputError("sample_counts: shots must be >= 1");
    }
    validate_probability(p, 1e-6);
    std::mt19937_64 rng(mix_seed({seed, 0x73616d706c65ULL}));

    // Sequential binomial decomposition of the multinomial draw, over the
    // canonical entry order.
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t remaining_shots = shots;
    double remaining_prob = p.sum();
    for (const auto& [bits, w] : p.entries) {
        if (remaining_shots == 0) {
            break;
        }
        double q = remaining_prob > 0.0 ? w / remaining_prob : 1.0;
        q = std::min(1.0, std::max(0.0, q));
        std::binomial_distribution<std::uint64_t> bin(remaining_shots, q);
        const std::uint64_t c = bin(rng);
        if (c > 0) {
            counts[bits] = c;
        }
        remaining_shots -= c;
        remaining_prob -= w;
    }
    if (remaining_shots > 0) {
        // Rounding left shots unassigned; put them on the last entry.
        counts[p.entries.rbegin()->first] += remaining_shots;
    }
    return from_counts(counts);
}

MqcSignalSet mqc_ideal_signals(int n, int n_angles) {
    if (n < 1) {
        throw InputError("mqc_ideal_signals: n must be >= 1");
    }
    if (n_angles < 2 * n + 2) {
        throw InputError("mqc_ideal_signals: need at least 2n+2 angles");
    }
    MqcSignalSet set;
    set.n = n;
    for (int j = 0; j < n_angles; ++j) {
        const double phi = 2.0 * M_PI * j / n_angles;
        const double c = std::cos(n * phi / 2.0);
        set.angles.push_back(phi);
        set.signals.push_back(c * c);
    }
    return set;
}

SparseDistribution peaked_distribution(int width, double zero_weight,
                                       int residual_support, std::uint64_t key) {
    if (width < 1 || residual_support < 1) {
        throw InputError("peaked_distribution: invalid parameters");
    }
    if (!(zero_weight >= 0.0 && zero_weight <= 1.0)) {
        throw InputError("peaked_distribution: zero weight outside [0, 1]");
    }
    std::mt19937_64 rng(key);
    std::set<std::string> residual;
    const std::size_t max_distinct = width >= 40
                                         ? std::numeric_limits<std::size_t>::max()
                                         : (std::size_t{1} << (width - 1));
    const std::size_t want = std::min<std::size_t>(
        static_cast<std::size_t>(residual_support), max_distinct);
    while (residual.size() < want) {
        std::string bits(static_cast<std::size_t>(width), '0');
        for (int q = 0; q + 1 < width; ++q) {
            bits[static_cast<std::size_t>(q)] = (rng() & 1u) ? '1' : '0';
        }
        // Final bit fixed to 1: the all-zeros string never sits in the residual.
        bits[static_cast<std::size_t>(width - 1)] = '1';
        residual.insert(std::move(bits));
    }
    SparseDistribution d;
    d.width = width;
    d.probability = true;
    if (zero_weight > 0.0) {
        d.entries[std::string(static_cast<std::size_t>(width), '0')] = zero_weight;
    }
    const double rest = (1.0 - zero_weight) / static_cast<double>(residual.size());
    if (rest > 0.0) {
        for (const auto& bits : residual) {
            d.entries[bits] = rest;
        }
    }
    return d;
}

SparseDistribution grover_ideal(int n, int m, double theta, int residual_support,
                                std::uint64_t seed) {
    if (n < 1 || m < 1) {
        throw InputError("grover_ideal: n and m must be >= 1");
    }
    const double c = std::cos(2.0 * m * theta);
    const double zero_weight = c * c;
    return peaked_distribution(n + 1, zero_weight, residual_support,
                               mix_seed({seed, static_cast<std::uint64_t>(n), 0x67726f766572ULL}));
}

AmplitudeTarget target_amplitude(int n, double b_max) {
    if (n < 1 || !(b_max > 0.0)) {
        throw InputError("target_amplitude: n must be >= 1 and b_max > 0");
    }
    AmplitudeTarget t;
    t.integral = (b_max / 2.0 - std::sin(2.0 * b_max) / 4.0) / b_max;
    const double states = std::pow(2.0, n);
    double s = 0.0;
    for (double x = 0.0; x < states; x += 1.0) {
        const double arg = (x + 0.5) * b_max / states;
        s += std::sin(arg) * std::sin(arg);
    }
    t.discrete = s / states;
    t.theta = std::asin(std::sqrt(t.discrete));
    return t;
}

}  // namespace qrem

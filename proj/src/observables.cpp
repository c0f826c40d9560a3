#include "qrem/observables.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "qrem/errors.hpp"

namespace qrem {

DiagonalObservable parity_observable(int n) {
    if (n < 1) {
        throw InputError("parity_observable: n must be >= 1");
    }
    DiagonalObservable o;
    o.bound = 1.0;
    o.eval = [](const std::string& bits) {
        const auto ones = std::count(bits.begin(), bits.end(), '1');
        return ones % 2 == 0 ? 1.0 : -1.0;
    };
    return o;
}

ExpvalResult expval_normalized(const SparseDistribution& p, const DiagonalObservable& o,
                               double sigma) {
    if (p.entries.empty()) {
        throw InputError("expval_normalized: empty distribution");
    }
    const double total = p.sum();
    if (total == 0.0) {
        throw DegenerateError("expval_normalized: element sum is zero");
    }
    double acc = 0.0;
    for (const auto& [bits, w] : p.entries) {
        acc += o.eval(bits) * w;
    }
    return {acc / total, sigma};
}

double expval_raw(const SparseDistribution& p, const DiagonalObservable& o) {
    double acc = 0.0;
    for (const auto& [bits, w] : p.entries) {
        acc += o.eval(bits) * w;
    }
    return acc;
}

FidelityResult mqc_fidelity(double population, const MqcSignalSet& signals) {
    if (!(population >= 0.0 && population <= 1.0 + 1e-9)) {
        throw InputError("mqc_fidelity: population must lie in [0, 1]");
    }
    const std::size_t count = signals.signals.size();
    if (signals.angles.size() != count) {
        throw InputError("mqc_fidelity: angle/signal size mismatch");
    }
    if (static_cast<int>(count) < 2 * signals.n + 2) {
        throw InputError("mqc_fidelity: need at least 2n+2 angles to resolve the q=n line");
    }
    std::complex<double> acc{0.0, 0.0};
    const double q = static_cast<double>(signals.n);
    for (std::size_t j = 0; j < count; ++j) {
        acc += signals.signals[j] *
               std::exp(std::complex<double>(0.0, q * signals.angles[j]));
    }
    FidelityResult res;
    res.i_n = std::abs(acc) / static_cast<double>(count);
    res.coherence = 2.0 * std::sqrt(res.i_n);
    res.fidelity = (population + res.coherence) / 2.0;
    return res;
}

}  // namespace qrem

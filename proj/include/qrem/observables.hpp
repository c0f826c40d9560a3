#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qrem/distribution.hpp"

namespace qrem {

// Diagonal observable: eigenvalue per bitstring, with a declared bound on
// |O(i)| so the mitigation error bar is interpretable.
struct DiagonalObservable {
    std::function<double(const std::string&)> eval;
    double bound = 1.0;
};

// O(i) = (-1)^(popcount of i).
DiagonalObservable parity_observable(int n);

struct ExpvalResult {
    double value = 0.0;
    double sigma = 0.0;
};

// Normalized by the element sum (mitigated vectors may not sum to one).
ExpvalResult expval_normalized(const SparseDistribution& p, const DiagonalObservable& o,
                               double sigma = 0.0);

// Direct weighted sum, no normalization.
double expval_raw(const SparseDistribution& p, const DiagonalObservable& o);

// Overlap signals S_phi on a uniform angle grid phi_j = 2*pi*j / N.
struct MqcSignalSet {
    int n = 0;
    std::vector<double> angles;
    std::vector<double> signals;
};

struct FidelityResult {
    double fidelity = 0.0;   // F = (P + C) / 2
    double coherence = 0.0;  // C = 2 sqrt(I_n)
    double i_n = 0.0;        // Fourier magnitude at q = n, normalized by N
};

// Requires at least 2n+2 uniformly spaced angles so the q = n line is
// resolvable without aliasing.
FidelityResult mqc_fidelity(double population, const MqcSignalSet& signals);

}  // namespace qrem

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qrem/errors.hpp"

namespace qrem {

// Bitstring convention: qubit 0 is the leftmost character. Keys are strings of
// '0'/'1' of exactly `width` characters. std::map keeps keys in lexicographic
// order, which is the canonical index order of the subspace S everywhere.
struct SparseDistribution {
    int width = 0;
    std::uint64_t total_shots = 0;  // 0 when unknown (exact probabilities)
    bool probability = false;       // weights are a normalized distribution
    std::map<std::string, double> entries;

    double sum() const;
    double at(const std::string& bits) const;  // 0 for absent keys

    // Keys in canonical (lexicographic) order.
    std::vector<std::string> subspace() const;
};

// Normalizes integer counts into a probability distribution. Zero-count keys
// are rejected upstream; zero weights never appear in the output.
SparseDistribution from_counts(const std::map<std::string, std::uint64_t>& counts);

// Wraps probability-valued weights; drops exact zeros, validates on request.
SparseDistribution from_probs(int width, const std::map<std::string, double>& probs,
                              std::uint64_t total_shots = 0);

double element_sum(const SparseDistribution& d);

// Throws InputError if d is not a valid probability distribution.
void validate_probability(const SparseDistribution& d, double tol = 1e-9);

// JSON format: {"width": n, "shots": s, "counts": {...}} or "probs" for
// probability-valued data.
std::string to_json_string(const SparseDistribution& d, int indent = 2);
SparseDistribution distribution_from_json_string(const std::string& text);
SparseDistribution load_distribution(const std::string& path);
void save_distribution(const SparseDistribution& d, const std::string& path);

bool valid_bitstring(const std::string& bits, int width);

}  // namespace qrem

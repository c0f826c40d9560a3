#include "qrem/distribution.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace qrem {

using nlohmann::json;

bool valid_bitstring(const std::string& bits, int width) {
    if (static_cast<int>(bits.size()) != width) {
        return false;
    }
    for (char c : bits) {
        if (c != '0' && c != '1') {
            return false;
        }
    }
    return true;
}

double SparseDistribution::sum() const {
    double s = 0.0;
    for (const auto& [bits, w] : entries) {
        s += w;
    }
    return s;
}

double SparseDistribution::at(const std::string& bits) const {
    auto it = entries.find(bits);
    return it == entries.end() ? 0.0 : it->second;
}

std::vector<std::string> SparseDistribution::subspace() const {
    std::vector<std::string> keys;
    keys.reserve(entries.size());
    for (const auto& [bits, w] : entries) {
        keys.push_back(bits);
    }
    return keys;
}

SparseDistribution from_counts(const std::map<std::string, std::uint64_t>& counts) {
    if (counts.empty()) {
        throw InputError("from_counts: empty counts");
    }
    const int width = static_cast<int>(counts.begin()->first.size());
    std::uint64_t total = 0;
    for (const auto& [bits, c] : counts) {
        if (!valid_bitstring(bits, width)) {
            throw InputError("from_counts: key '" + bits + "' does not match width " +
                             std::to_string(width));
        }
        total += c;
    }
    if (total == 0) {
        throw InputError("from_counts: all counts are zero");
    }
    SparseDistribution d;
    d.width = width;
    d.total_shots = total;
    d.probability = true;
    for (const auto& [bits, c] : counts) {
        if (c > 0) {
            d.entries[bits] = static_cast<double>(c) / static_cast<double>(total);
        }
    }
    return d;
}

SparseDistribution from_probs(int width, const std::map<std::string, double>& probs,
                              std::uint64_t total_shots) {
    SparseDistribution d;
    d.width = width;
    d.total_shots = total_shots;
    d.probability = true;
    for (const auto& [bits, w] : probs) {
        if (!valid_bitstring(bits, width)) {
            throw InputError("from_probs: key '" + bits + "' does not match width " +
                             std::to_string(width));
        }
        if (!std::isfinite(w)) {
            throw InputError("from_probs: non-finite weight for '" + bits + "'");
        }
        if (w != 0.0) {
            d.entries[bits] = w;
        }
    }
    return d;
}

double element_sum(const SparseDistribution& d) {
    return d.sum();
}

void validate_probability(const SparseDistribution& d, double tol) {
    for (const auto& [bits, w] : d.entries) {
        if (!(w >= 0.0)) {
            throw InputError("distribution has negative weight at '" + bits + "'");
        }
    }
    if (std::abs(d.sum() - 1.0) > tol) {
        throw InputError("distribution weights sum to " + std::to_string(d.sum()) +
                         ", expected 1");
    }
}

std::string to_json_string(const SparseDistribution& d, int indent) {
    json j;
    j["width"] = d.width;
    j["shots"] = d.total_shots;
    json body = json::object();
    if (d.probability) {
        for (const auto& [bits, w] : d.entries) {
            body[bits] = w;
        }
        j["probs"] = body;
    } else {
        for (const auto& [bits, w] : d.entries) {
            body[bits] = w;
        }
        j["counts"] = body;
    }
    return j.dump(indent);
}

SparseDistribution distribution_from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("distribution JSON parse error: ") + e.what());
    }
    if (!j.contains("width")) {
        throw InputError("distribution JSON missing 'width'");
    }
    SparseDistribution d;
    d.width = j.at("width").get<int>();
    if (d.width < 1) {
        throw InputError("distribution width must be >= 1");
    }
    d.total_shots = j.value("shots", std::uint64_t{0});
    const bool has_probs = j.contains("probs");
    const bool has_counts = j.contains("counts");
    if (has_probs == has_counts) {
        throw InputError("distribution JSON needs exactly one of 'counts' or 'probs'");
    }
    if (has_counts) {
        // Integer counts get normalized; real-valued entries under "counts" are
        // accepted and treated as weights directly.
        bool integral = true;
        for (const auto& [bits, v] : j.at("counts").items()) {
            if (!v.is_number_integer() && !v.is_number_unsigned()) {
                integral = false;
            }
            (void)bits;
        }
        if (integral) {
            std::map<std::string, std::uint64_t> counts;
            for (const auto& [bits, v] : j.at("counts").items()) {
                counts[bits] = v.get<std::uint64_t>();
            }
            auto built = from_counts(counts);
            if (built.width != d.width) {
                throw InputError("distribution keys do not match declared width");
            }
            if (d.total_shots != 0 && d.total_shots != built.total_shots) {
                throw InputError("declared shots disagree with count total");
            }
            return built;
        }
        for (const auto& [bits, v] : j.at("counts").items()) {
            if (!valid_bitstring(bits, d.width)) {
                throw InputError("distribution key '" + bits + "' does not match width");
            }
            double w = v.get<double>();
            if (w != 0.0) {
                d.entries[bits] = w;
            }
        }
        d.probability = false;
        return d;
    }
    for (const auto& [bits, v] : j.at("probs").items()) {
        if (!valid_bitstring(bits, d.width)) {
            throw InputError("distribution key '" + bits + "' does not match width");
        }
        double w = v.get<double>();
        if (w != 0.0) {
            d.entries[bits] = w;
        }
    }
    d.probability = true;
    return d;
}

SparseDistribution load_distribution(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open distribution file: " + path);
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return distribution_from_json_string(text);
}

void save_distribution(const SparseDistribution& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write distribution file: " + path);
    }
    out << to_json_string(d) << "\n";
}

}  // namespace qrem

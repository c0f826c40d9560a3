#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qrem/baselines.hpp"

using namespace qrem;

namespace {

TensorNoiseModel random_model(int n, std::mt19937_64& rng, double max_p = 0.1) {
    std::uniform_real_distribution<double> u(0.0, max_p);
    TensorNoiseModel model;
    model.width = n;
    for (int q = 0; q < n; ++q) {
        Eigen::MatrixXd m(2, 2);
        const double p01 = u(rng);
        const double p10 = u(rng);
        m << 1.0 - p10, p01, p10, 1.0 - p01;
        model.blocks.push_back({{q}, m});
    }
    return model;
}

SparseDistribution random_counts(int n, std::size_t keys, std::mt19937_64& rng) {
    std::map<std::string, std::uint64_t> counts;
    while (counts.size() < keys) {
        std::string bits(static_cast<std::size_t>(n), '0');
        for (int q = 0; q < n; ++q) {
            bits[static_cast<std::size_t>(q)] = (rng() & 1u) ? '1' : '0';
        }
        counts[bits] = 1 + rng() % 400;
    }
    return from_counts(counts);
}

}  // namespace

TEST_CASE("rigorous_mitigate with the identity model returns the input") {
    auto ident = synth_uniform(3, 0.0, 0.0);
    auto y = from_probs(3, {{"000", 0.7}, {"111", 0.3}});
    auto r = rigorous_mitigate(y, ident);
    CHECK(r.mitigated.at("000") == doctest::Approx(0.7));
    CHECK(r.mitigated.at("111") == doctest::Approx(0.3));
}

TEST_CASE("rigorous_mitigate exact inversion example") {
    auto model = synth_uniform(1, 0.1, 0.1);
    auto y = from_probs(1, {{"0", 0.9}, {"1", 0.1}});
    auto r = rigorous_mitigate(y, model);
    CHECK(r.mitigated.at("0") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.mitigated.at("1") == doctest::Approx(0.0));
}

TEST_CASE("rigorous_mitigate cap") {
    auto model = synth_uniform(6, 0.01, 0.01);
    auto y = from_probs(6, {{"000000", 1.0}});
    CHECK_THROWS_AS(rigorous_mitigate(y, model, 5), CapError);
}

TEST_CASE("mooney with t=0 equals rigorous mitigation") {
    std::mt19937_64 rng(73);
    for (int n = 1; n <= 6; ++n) {
        auto model = random_model(n, rng);
        auto y = random_counts(n, std::min<std::size_t>(10, std::size_t{1} << n), rng);
        auto rig = rigorous_mitigate(y, model);
        auto moo = mooney_mitigate(y, model, 0.0);
        for (const auto& [bits, w] : rig.mitigated.entries) {
            CHECK(moo.mitigated.at(bits) == doctest::Approx(w).epsilon(1e-9));
        }
        for (const auto& [bits, w] : moo.mitigated.entries) {
            CHECK(rig.mitigated.at(bits) == doctest::Approx(w).epsilon(1e-9));
        }
    }
}

TEST_CASE("rigorous equals the proposed pipeline on the full space") {
    std::mt19937_64 rng(79);
    for (int n = 1; n <= 6; ++n) {
        auto model = random_model(n, rng);
        // Full-support distribution so S covers every bitstring.
        std::map<std::string, std::uint64_t> counts;
        for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
            std::string bits(static_cast<std::size_t>(n), '0');
            for (int q = 0; q < n; ++q) {
                if ((i >> (n - 1 - q)) & 1u) {
                    bits[static_cast<std::size_t>(q)] = '1';
                }
            }
            counts[bits] = 1 + rng() % 100;
        }
        auto y = from_counts(counts);
        auto rig = rigorous_mitigate(y, model);
        MitigateOptions opt;
        opt.matrix_free = true;
        auto prop = mitigate(y, model, opt);
        for (const auto& [bits, w] : rig.mitigated.entries) {
            CHECK(prop.mitigated.at(bits) == doctest::Approx(w).epsilon(1e-9));
        }
    }
}

TEST_CASE("both baselines return probability distributions") {
    std::mt19937_64 rng(83);
    auto model = random_model(5, rng);
    auto y = random_counts(5, 8, rng);
    for (double t : {0.0, 0.01, 0.05}) {
        auto r = mooney_mitigate(y, model, t);
        CHECK_NOTHROW(validate_probability(r.mitigated, 1e-9));
    }
    CHECK_NOTHROW(validate_probability(rigorous_mitigate(y, model).mitigated, 1e-9));
}

TEST_CASE("mooney identity model truncation removes small entries") {
    auto ident = synth_uniform(2, 0.0, 0.0);
    auto y = from_probs(2, {{"00", 0.9}, {"01", 0.05}, {"11", 0.05}});
    auto r = mooney_mitigate(y, ident, 0.08);
    CHECK(r.mitigated.entries.size() == 1);
    CHECK(r.mitigated.at("00") == doctest::Approx(1.0));
    CHECK_THROWS_AS(mooney_mitigate(y, ident, 1.5), InputError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qrem/noise_model.hpp"

using namespace qrem;

namespace {

// Random single-qubit tensor model, optionally asymmetric.
TensorNoiseModel random_model(int n, std::mt19937_64& rng, double max_p = 0.1) {
    std::uniform_real_distribution<double> u(0.0, max_p);
    TensorNoiseModel model;
    model.width = n;
    for (int q = 0; q < n; ++q) {
        const double p01 = u(rng);
        const double p10 = u(rng);
        Eigen::MatrixXd m(2, 2);
        m << 1.0 - p10, p01, p10, 1.0 - p01;
        model.blocks.push_back({{q}, m});
    }
    return model;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("synth_uniform builds the expected single-qubit blocks") {
    auto ident = synth_uniform(1, 0.0, 0.0);
    CHECK(ident.blocks.size() == 1);
    CHECK(ident.blocks[0].matrix.isApprox(Eigen::MatrixXd::Identity(2, 2)));

    auto sym = synth_uniform(1, 0.03, 0.03);
    CHECK(sym.blocks[0].matrix(0, 0) == doctest::Approx(0.97));
    CHECK(sym.blocks[0].matrix(0, 1) == doctest::Approx(0.03));
    CHECK(sym.blocks[0].matrix(1, 0) == doctest::Approx(0.03));
    CHECK(sym.blocks[0].matrix(1, 1) == doctest::Approx(0.97));

    auto asym = synth_uniform(2, 0.2, 0.0);
    for (const auto& b : asym.blocks) {
        CHECK(b.matrix(0, 0) == doctest::Approx(1.0));
        CHECK(b.matrix(0, 1) == doctest::Approx(0.2));
        CHECK(b.matrix(1, 0) == doctest::Approx(0.0));
        CHECK(b.matrix(1, 1) == doctest::Approx(0.8));
    }

    CHECK_THROWS_AS(synth_uniform(1, 0.6, 0.0), InputError);
    CHECK_THROWS_AS(synth_uniform(1, -0.1, 0.0), InputError);
}

TEST_CASE("full_matrix examples") {
    auto ident = synth_uniform(3, 0.0, 0.0);
    CHECK(full_matrix(ident).isApprox(Eigen::MatrixXd::Identity(8, 8)));

    auto one = synth_uniform(1, 0.07, 0.02);
    CHECK(full_matrix(one).isApprox(one.blocks[0].matrix));

    auto two = synth_uniform(2, 0.1, 0.1);
    auto a = full_matrix(two);
    CHECK(a(0, 0) == doctest::Approx(0.81));
}

TEST_CASE("full_matrix honors the size cap") {
    auto model = synth_uniform(6, 0.01, 0.01);
    CHECK_THROWS_AS(full_matrix(model, 5), CapError);
}

TEST_CASE("full_matrix equals the explicit Kronecker product") {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 8; ++n) {
        auto model = random_model(n, rng);
        Eigen::MatrixXd expect = model.blocks[0].matrix;
        for (int q = 1; q < n; ++q) {
            expect = kron(expect, model.blocks[q].matrix);
        }
        auto got = full_matrix(model);
        CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("full_matrix stays column-stochastic") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        auto model = random_model(2 + static_cast<int>(rng() % 5), rng);
        auto a = full_matrix(model);
        for (int j = 0; j < a.cols(); ++j) {
            CHECK(a.col(j).sum() == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("svd_cache of a symmetric single-qubit block") {
    auto model = synth_uniform(1, 0.1, 0.1);
    auto cache = svd_cache(model);
    const auto& b = cache.blocks[0];
    CHECK(b.sigma(0) == doctest::Approx(1.0));
    CHECK(b.sigma(1) == doctest::Approx(0.8));
    // Hadamard eigenvectors with non-negative-sum orientation.
    CHECK(b.v(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(b.v(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(b.v_col_sums(0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(b.v_col_sums(1) == doctest::Approx(0.0));
}

TEST_CASE("svd_cache identity block") {
    auto cache = svd_cache(synth_uniform(1, 0.0, 0.0));
    CHECK(cache.blocks[0].sigma(0) == doctest::Approx(1.0));
    CHECK(cache.blocks[0].sigma(1) == doctest::Approx(1.0));
}

TEST_CASE("svd reconstruction matches the calibration matrix") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        auto model = random_model(3, rng, 0.25);
        auto cache = svd_cache(model);
        for (std::size_t b = 0; b < model.blocks.size(); ++b) {
            const auto& s = cache.blocks[b];
            Eigen::MatrixXd rebuilt = s.u * s.sigma.asDiagonal() * s.v.transpose();
            CHECK((rebuilt - model.blocks[b].matrix).cwiseAbs().maxCoeff() < 1e-10);
        }
    }

    // Asymmetric example from an exact 2x2 SVD.
    TensorNoiseModel asym;
    asym.width = 1;
    Eigen::MatrixXd m(2, 2);
    m << 1.0, 0.2, 0.0, 0.8;
    asym.blocks.push_back({{0}, m});
    auto cache = svd_cache(asym);
    const auto& s = cache.blocks[0];
    Eigen::MatrixXd rebuilt = s.u * s.sigma.asDiagonal() * s.v.transpose();
    CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("symmetric blocks have zero column sums beyond the leading vector") {
    for (double p : {0.01, 0.05, 0.2}) {
        auto cache = svd_cache(synth_uniform(4, p, p));
        for (const auto& b : cache.blocks) {
            CHECK(std::abs(b.v_col_sums(1)) < 1e-12);
        }
    }
}

TEST_CASE("model JSON round trip and column renormalization") {
    auto model = synth_uniform(3, 0.02, 0.05);
    auto parsed = model_from_json_string(model_to_json_string(model));
    CHECK(parsed.width == 3);
    for (std::size_t b = 0; b < model.blocks.size(); ++b) {
        CHECK(parsed.blocks[b].matrix.isApprox(model.blocks[b].matrix, 1e-12));
    }
    CHECK_THROWS_AS(model_from_json_string("{}"), InputError);
}

TEST_CASE("validate_model rejects bad structure") {
    TensorNoiseModel overlap;
    overlap.width = 2;
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    overlap.blocks.push_back({{0}, m});
    overlap.blocks.push_back({{0}, m});
    CHECK_THROWS_AS(validate_model(overlap), InputError);

    TensorNoiseModel gap;
    gap.width = 2;
    gap.blocks.push_back({{0}, m});
    CHECK_THROWS_AS(validate_model(gap), InputError);

    TensorNoiseModel singular;
    singular.width = 1;
    Eigen::MatrixXd s(2, 2);
    s << 0.5, 0.5, 0.5, 0.5;
    singular.blocks.push_back({{0}, s});
    CHECK_THROWS_AS(validate_model(singular), DegenerateError);
}

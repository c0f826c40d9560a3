#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qrem/sum_correction.hpp"

using namespace qrem;

namespace {

std::vector<std::string> full_space(int n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
        std::string bits(static_cast<std::size_t>(n), '0');
        for (int q = 0; q < n; ++q) {
            if ((i >> (n - 1 - q)) & 1u) {
                bits[static_cast<std::size_t>(q)] = '1';
            }
        }
        out.push_back(bits);
    }
    return out;
}

// Constrained-QP oracle via a generic KKT linear solve:
//   minimize sum_i w_i d_i^2  subject to a . d = c
struct QpSolution {
    Eigen::VectorXd d;
    double objective;
};

QpSolution weighted_qp_oracle(const Eigen::VectorXd& w, const Eigen::VectorXd& a, double c) {
    const int n = static_cast<int>(w.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
        kkt(i, i) = 2.0 * w(i);
        kkt(i, n) = a(i);
        kkt(n, i) = a(i);
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(n) = c;
    Eigen::VectorXd sol = kkt.colPivHouseholderQr().solve(rhs);
    QpSolution out;
    out.d = sol.head(n);
    out.objective = (w.array() * out.d.array().square()).sum();
    return out;
}

}  // namespace

TEST_CASE("least_norm examples") {
    Eigen::VectorXd x(2);
    x << 0.4, 0.4;
    auto r = least_norm(x);
    CHECK(r.corrected(0) == doctest::Approx(0.5));
    CHECK(r.corrected(1) == doctest::Approx(0.5));
    CHECK(r.achieved_sum == doctest::Approx(1.0).epsilon(1e-12));

    x << 1.2, -0.1;
    r = least_norm(x);
    CHECK(r.corrected(0) == doctest::Approx(1.15));
    CHECK(r.corrected(1) == doctest::Approx(-0.15));

    x << 0.6, 0.4;
    r = least_norm(x);
    CHECK(r.corrected(0) == doctest::Approx(0.6));
    CHECK(r.correction_norm == doctest::Approx(0.0));
}

TEST_CASE("least_norm preserves pairwise differences and matches the QP oracle") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    for (int rep = 0; rep < 100; ++rep) {
        const int dim = 2 + static_cast<int>(rng() % 31);
        Eigen::VectorXd x(dim);
        for (int i = 0; i < dim; ++i) {
            x(i) = u(rng);
        }
        auto r = least_norm(x);
        CHECK(r.achieved_sum == doctest::Approx(1.0).epsilon(1e-12));
        for (int i = 1; i < dim; ++i) {
            CHECK(r.corrected(i) - r.corrected(0) == doctest::Approx(x(i) - x(0)).epsilon(1e-13));
        }
        // Oracle: minimize ||z||^2 subject to 1.z = 1 - sum(x).
        auto qp = weighted_qp_oracle(Eigen::VectorXd::Ones(dim), Eigen::VectorXd::Ones(dim),
                                     1.0 - x.sum());
        CHECK((r.corrected - (x + qp.d)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("delta_exact zero-deficit input is untouched") {
    auto cache = svd_cache(synth_uniform(1, 0.1, 0.1));
    Eigen::VectorXd x(2);
    x << 0.7, 0.3;
    auto r = delta_exact(x, cache, {"0", "1"}, 1);
    CHECK(r.correction_norm == doctest::Approx(0.0));
    CHECK((r.corrected - x).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("delta correction on a symmetric single qubit") {
    auto cache = svd_cache(synth_uniform(1, 0.1, 0.1));
    Eigen::VectorXd x(2);
    x << 0.6, 0.3;
    auto exact = delta_exact(x, cache, {"0", "1"}, 1);
    CHECK(exact.corrected(0) == doctest::Approx(0.65));
    CHECK(exact.corrected(1) == doctest::Approx(0.35));

    // k = 2 is identical: the second direction has zero column sum.
    auto k2 = delta_exact(x, cache, {"0", "1"}, 2);
    CHECK((k2.corrected - exact.corrected).cwiseAbs().maxCoeff() < 1e-14);

    auto approx = delta_approx(x, cache, {"0", "1"});
    CHECK(approx.corrected(0) == doctest::Approx(0.65));
    CHECK(approx.corrected(1) == doctest::Approx(0.35));
}

TEST_CASE("delta_approx records the uncorrected sum deficit on a restricted subspace") {
    auto cache = svd_cache(synth_uniform(3, 0.1, 0.1));
    Eigen::VectorXd x(2);
    x << 0.6, 0.3;  // sums to 0.9; correction spreads (1-0.9)/8 per full-space element
    auto r = delta_approx(x, cache, {"000", "111"});
    CHECK(r.corrected(0) == doctest::Approx(0.6125));
    CHECK(r.corrected(1) == doctest::Approx(0.3125));
    CHECK(r.achieved_sum == doctest::Approx(0.925));
}

TEST_CASE("symmetric-model collapse: per-element correction is (1 - sum)/2^n") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 0.3);
    for (int n = 1; n <= 10; ++n) {
        auto cache = svd_cache(synth_uniform(n, 0.05, 0.05));
        std::vector<std::string> sub = {std::string(static_cast<std::size_t>(n), '0'),
                                        std::string(static_cast<std::size_t>(n), '1')};
        Eigen::VectorXd x(2);
        x << u(rng) + 0.3, u(rng) + 0.1;
        auto r = delta_approx(x, cache, sub);
        const double expect = (1.0 - x.sum()) / std::pow(2.0, n);
        CHECK(r.corrected(0) - x(0) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(r.corrected(1) - x(1) == doctest::Approx(expect).epsilon(1e-12));

        // With zero column sums beyond the leading direction, k=1 exact equals approx.
        auto exact = delta_exact(x, cache, sub, 1);
        CHECK((exact.corrected - r.corrected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("delta_exact with all directions matches the constrained-QP oracle") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.0, 0.2);
    for (int n = 1; n <= 4; ++n) {
        TensorNoiseModel model;
        model.width = n;
        for (int q = 0; q < n; ++q) {
            Eigen::MatrixXd m(2, 2);
            const double p01 = u(rng);
            const double p10 = u(rng);
            m << 1.0 - p10, p01, p10, 1.0 - p01;
            model.blocks.push_back({{q}, m});
        }
        auto cache = svd_cache(model);
        auto sub = full_space(n);
        const int dim = static_cast<int>(sub.size());
        Eigen::VectorXd x(dim);
        for (int i = 0; i < dim; ++i) {
            x(i) = u(rng);
        }

        const int k = dim;  // all 2^n directions
        auto r = delta_exact(x, cache, sub, k);
        // Full space + full direction set makes the constraint exact.
        CHECK(r.achieved_sum == doctest::Approx(1.0).epsilon(1e-9));

        // Oracle solves min sum sigma_i^2 d_i^2 s.t. sum (1.v_i) d_i = 1 - sum(x).
        auto dirs = top_directions_by_col_sum(cache, k);
        Eigen::VectorXd w(k);
        Eigen::VectorXd a(k);
        for (int i = 0; i < k; ++i) {
            w(i) = dirs[static_cast<std::size_t>(i)].sigma * dirs[static_cast<std::size_t>(i)].sigma;
            a(i) = dirs[static_cast<std::size_t>(i)].col_sum;
        }
        auto qp = weighted_qp_oracle(w, a, 1.0 - x.sum());

        double impl_objective = 0.0;
        const double deficit = 1.0 - x.sum();
        double denom = 0.0;
        for (int i = 0; i < k; ++i) {
            denom += a(i) * a(i) / w(i);
        }
        for (int i = 0; i < k; ++i) {
            const double coeff = (deficit / denom) * a(i) / w(i);
            impl_objective += w(i) * coeff * coeff;
        }
        CHECK(impl_objective == doctest::Approx(qp.objective).epsilon(1e-8));
    }
}

TEST_CASE("degenerate constraint raises") {
    // A column-sum-zero-only selection cannot satisfy the constraint. Build a
    // synthetic cache whose every direction has zero column sum.
    SvdCache cache;
    cache.width = 1;
    cache.qubits = {{0}};
    BlockSvd b;
    b.sigma = Eigen::VectorXd::Ones(2);
    b.u = Eigen::MatrixXd::Identity(2, 2);
    b.v.resize(2, 2);
    b.v << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0), -1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
    b.v_col_sums = b.v.colwise().sum();  // both zero
    cache.blocks.push_back(b);
    Eigen::VectorXd x(2);
    x << 0.4, 0.4;
    CHECK_THROWS_AS(delta_exact(x, cache, {"0", "1"}, 2), DegenerateError);
    CHECK_THROWS_AS(delta_approx(x, cache, {"0", "1"}), DegenerateError);
}

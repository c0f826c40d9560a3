// Benchmarks the serial reference kernels against the OpenMP kernels and
// verifies that their outputs agree bit-for-bit.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <Eigen/Dense>

#include "qrem/kernels.hpp"
#include "qrem/noise_model.hpp"
#include "qrem/sim.hpp"

using namespace qrem;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 65;
    const std::size_t max_size = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 8192;
    const int threads = argc > 3 ? std::atoi(argv[3]) : 0;
    std::printf("width %d, up to |S| = %zu, %d thread(s)\n", n, max_size,
                effective_threads(threads));
    std::printf("%8s %14s %14s %9s %14s %14s %9s %10s\n", "|S|", "dense_ser_s",
                "dense_par_s", "speedup", "mfree_ser_s", "mfree_par_s", "speedup",
                "identical");

    const auto model = synth_uniform(n, 0.03, 0.03);
    for (std::size_t size = 1024; size <= max_size; size *= 2) {
        const auto dist = peaked_distribution(n, 0.3, static_cast<int>(size) - 1, 909);
        const auto subspace = dist.subspace();
        Eigen::VectorXd y(static_cast<Eigen::Index>(subspace.size()));
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            y[i] = dist.at(subspace[static_cast<std::size_t>(i)]);
        }
        const auto table = build_reduction_table(model, subspace);

        double t = now_seconds();
        const Eigen::MatrixXd dense_ser = reduced_inverse_serial(table);
        const double dense_ser_s = now_seconds() - t;
        t = now_seconds();
        const Eigen::MatrixXd dense_par = reduced_inverse_parallel(table, threads);
        const double dense_par_s = now_seconds() - t;

        t = now_seconds();
        const auto mfree_ser = apply_matrix_free_serial(table, y);
        const double mfree_ser_s = now_seconds() - t;
        t = now_seconds();
        const auto mfree_par = apply_matrix_free_parallel(table, y, threads);
        const double mfree_par_s = now_seconds() - t;

        const bool identical = dense_ser == dense_par && mfree_ser.x == mfree_par.x &&
                               mfree_ser.one_norm == mfree_par.one_norm;
        std::printf("%8zu %14.4f %14.4f %8.2fx %14.4f %14.4f %8.2fx %10s\n",
                    subspace.size(), dense_ser_s, dense_par_s,
                    dense_ser_s / dense_par_s, mfree_ser_s, mfree_par_s,
                    mfree_ser_s / mfree_par_s, identical ? "yes" : "NO");
        if (!identical) return 1;
    }
    return 0;
}

#include "qrem/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qrem/errors.hpp"

namespace qrem {

SgsResult sgs_project(const Eigen::VectorXd& x, double sum_tol) {
    const std::int64_t n = x.size();
    if (n < 1) {
        throw InputError("sgs_project: empty vector");
    }
    const double total = x.sum();
    if (std::isfinite(sum_tol) && std::abs(total - 1.0) > sum_tol) {
        throw InputError("sgs_project: element sum " + std::to_string(total) +
                         " violates the sum-to-one precondition");
    }

    std::vector<std::int64_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::int64_t a, std::int64_t b) { return x(a) < x(b); });

    // Drop entries from the smallest up while the accumulated deficit, spread
    // over the remaining ones, would drive the next entry below zero.
    double deficit = 0.0;
    std::size_t dropped = 0;
    while (dropped < order.size()) {
        const double v = x(order[dropped]);
        const double remaining = static_cast<double>(n - static_cast<std::int64_t>(dropped));
        if (v + deficit / remaining < 0.0) {
            deficit += v;
            ++dropped;
        } else {
            break;
        }
    }
    if (dropped == order.size()) {
        throw DegenerateError("sgs_project: no entry survives the projection");
    }

    // The shift is applied once, from the deficit at loop exit, not
    // incrementally while popping.
    const double shift = deficit / static_cast<double>(n - static_cast<std::int64_t>(dropped));
    SgsResult res;
    res.projected = Eigen::VectorXd::Zero(n);
    for (std::size_t r = dropped; r < order.size(); ++r) {
        res.projected(order[r]) = x(order[r]) + shift;
    }
    for (std::size_t r = 0; r < dropped; ++r) {
        const double v = x(order[r]);
        if (v < 0.0) {
            res.negative_mass_removed += -v;
        }
    }
    return res;
}

}  // namespace qrem

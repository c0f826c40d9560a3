#include "qrem/sum_correction.hpp"

#include <cmath>
#include <queue>
#include <set>

#include "qrem/errors.hpp"

namespace qrem {

namespace {

struct HeapEntry {
    double score;                 // product of |1^T v| over blocks
    std::vector<int> ranks;       // per-block position in the sorted-by-|col sum| list
    bool operator<(const HeapEntry& o) const { return score < o.score; }
};

}  // namespace

std::vector<TensorDirection> top_directions_by_col_sum(const SvdCache& cache, int k) {
    const std::size_t nb = cache.blocks.size();
    // Per block, directions sorted by |1^T v| descending.
    std::vector<std::vector<int>> order(nb);
    std::size_t total = 1;
    bool overflow = false;
    for (std::size_t b = 0; b < nb; ++b) {
        const auto& cs = cache.blocks[b].v_col_sums;
        order[b].resize(static_cast<std::size_t>(cs.size()));
        for (int i = 0; i < cs.size(); ++i) {
            order[b][static_cast<std::size_t>(i)] = i;
        }
        std::sort(order[b].begin(), order[b].end(), [&](int a, int c) {
            const double da = std::abs(cs(a));
            const double dc = std::abs(cs(c));
            if (da != dc) {
                return da > dc;
            }
            return a < c;
        });
        if (total > (std::size_t{1} << 40) / cs.size()) {
            overflow = true;
        } else {
            total *= static_cast<std::size_t>(cs.size());
        }
    }
    if (k < 1) {
        throw InputError("direction count k must be >= 1");
    }
    if (!overflow && static_cast<std::size_t>(k) > total) {
        k = static_cast<int>(total);
    }

    auto score_at = [&](const std::vector<int>& ranks) {
        double s = 1.0;
        for (std::size_t b = 0; b < nb; ++b) {
            s *= std::abs(cache.blocks[b].v_col_sums(order[b][static_cast<std::size_t>(ranks[b])]));
        }
        return s;
    };

    std::priority_queue<HeapEntry> heap;
    std::set<std::vector<int>> visited;
    std::vector<int> start(nb, 0);
    heap.push({score_at(start), start});
    visited.insert(start);

    std::vector<TensorDirection> out;
    while (!heap.empty() && static_cast<int>(out.size()) < k) {
        HeapEntry top = heap.top();
        heap.pop();
        TensorDirection dir;
        dir.block_dirs.resize(nb);
        dir.sigma = 1.0;
        dir.col_sum = 1.0;
        for (std::size_t b = 0; b < nb; ++b) {
            const int idx = order[b][static_cast<std::size_t>(top.ranks[b])];
            dir.block_dirs[b] = idx;
            dir.sigma *= cache.blocks[b].sigma(idx);
            dir.col_sum *= cache.blocks[b].v_col_sums(idx);
        }
        out.push_back(std::move(dir));
        for (std::size_t b = 0; b < nb; ++b) {
            if (top.ranks[b] + 1 < static_cast<int>(order[b].size())) {
                std::vector<int> next = top.ranks;
                ++next[b];
                if (visited.insert(next).second) {
                    heap.push({score_at(next), next});
                }
            }
        }
    }
    return out;
}

Eigen::VectorXd restrict_direction(const SvdCache& cache, const TensorDirection& dir,
                                   const std::vector<std::string>& subspace) {
    Eigen::VectorXd v(static_cast<std::int64_t>(subspace.size()));
    for (std::size_t e = 0; e < subspace.size(); ++e) {
        double p = 1.0;
        for (std::size_t b = 0; b < cache.blocks.size(); ++b) {
            const int s = sub_index(subspace[e], cache.qubits[b]);
            p *= cache.blocks[b].v(s, dir.block_dirs[b]);
        }
        v(static_cast<std::int64_t>(e)) = p;
    }
    return v;
}

CorrectionResult delta_exact(const Eigen::VectorXd& x, const SvdCache& cache,
                             const std::vector<std::string>& subspace, int k) {
    if (static_cast<std::size_t>(x.size()) != subspace.size()) {
        throw InputError("delta_exact: vector size does not match subspace");
    }
    const auto dirs = top_directions_by_col_sum(cache, k);
    double denom = 0.0;
    for (const auto& d : dirs) {
        denom += (d.col_sum * d.col_sum) / (d.sigma * d.sigma);
    }
    if (denom <= 1e-300) {
        throw DegenerateError("delta correction: all selected directions have zero column sum");
    }
    const double deficit = 1.0 - x.sum();
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(x.size());
    for (const auto& d : dirs) {
        const double coeff = (deficit / denom) * d.col_sum / (d.sigma * d.sigma);
        if (coeff != 0.0) {
            delta += coeff * restrict_direction(cache, d, subspace);
        }
    }
    CorrectionResult res;
    res.corrected = x + delta;
    res.correction_norm = delta.norm();
    res.achieved_sum = res.corrected.sum();
    return res;
}

CorrectionResult delta_approx(const Eigen::VectorXd& x, const SvdCache& cache,
                              const std::vector<std::string>& subspace) {
    if (static_cast<std::size_t>(x.size()) != subspace.size()) {
        throw InputError("delta_approx: vector size does not match subspace");
    }
    TensorDirection lead;
    lead.block_dirs.assign(cache.blocks.size(), 0);
    lead.sigma = 1.0;
    lead.col_sum = 1.0;
    for (const auto& b : cache.blocks) {
        lead.sigma *= b.sigma(0);
        lead.col_sum *= b.v_col_sums(0);
    }
    if (std::abs(lead.col_sum) <= 1e-300) {
        throw DegenerateError("delta correction: leading direction has zero column sum");
    }
    const double coeff = (1.0 - x.sum()) / lead.col_sum;
    Eigen::VectorXd delta = coeff * restrict_direction(cache, lead, subspace);
    CorrectionResult res;
    res.corrected = x + delta;
    res.correction_norm = delta.norm();
    res.achieved_sum = res.corrected.sum();
    return res;
}

CorrectionResult least_norm(const Eigen::VectorXd& x) {
    if (x.size() < 1) {
        throw InputError("least_norm: empty vector");
    }
    const double shift = (1.0 - x.sum()) / static_cast<double>(x.size());
    CorrectionResult res;
    res.corrected = x.array() + shift;
    res.correction_norm = std::abs(shift) * std::sqrt(static_cast<double>(x.size()));
    res.achieved_sum = res.corrected.sum();
    return res;
}

}  // namespace qrem

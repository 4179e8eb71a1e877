#include "tradepost/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tradepost/errors.hpp"
#include "tradepost/lyapunov.hpp"
#include "tradepost/union_find.hpp"

namespace tradepost {

namespace {

/// Records sampled on the regular stride, which makes record lags map to
/// fixed time lags.
std::vector<const TrajectoryRecord*> regular_samples(const Trajectory& traj) {
    std::vector<const TrajectoryRecord*> out;
    if (traj.records.empty() || traj.stride == 0) return out;
    const std::size_t t0 = traj.records.front().t;
    for (const auto& r : traj.records)
        if ((r.t - t0) % traj.stride == 0) out.push_back(&r);
    return out;
}

std::span<const double> cycle_signal(const TrajectoryRecord& r) {
    if (!r.prices.empty()) return r.prices;
    return r.allocation.values();
}

}  // namespace

Partition equivalence_classes(const Matrix& x, double eps) {
    const std::size_t n = x.rows();
    UnionFind uf(n);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        std::size_t first = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (x(i, j) <= eps) continue;
            if (first == n)
                first = i;
            else
                uf.unite(first, i);
        }
    }
    Partition p;
    p.classes = uf.groups();
    p.class_of.assign(n, 0);
    for (std::size_t c = 0; c < p.classes.size(); ++c)
        for (std::size_t i : p.classes[c]) p.class_of[i] = c;
    return p;
}

EquilibriumCertificate scaled_reference(const Trajectory& traj, const EquilibriumCertificate& c) {
    if (traj.records.empty() || traj.records.front().budget.empty()) return c;
    const TrajectoryRecord& first = traj.records.front();
    MarketState s;
    s.budget = first.budget;
    s.bank = first.bank;
    return rescale(c, money_scale(c, s, traj.alpha));
}

ClassStructure lambda_structure(const Trajectory& traj, const EquilibriumCertificate& c,
                                std::size_t window, double tol) {
    if (traj.records.empty() || traj.mode == Mode::kTft)
        throw NotApplicableError("lambda_structure: needs a money trajectory");
    const std::size_t count = std::min(std::max<std::size_t>(window, 1), traj.records.size());
    const std::size_t begin = traj.records.size() - count;
    const Matrix& limit = traj.records.back().allocation;

    double drift = 0.0;
    for (std::size_t k = begin; k < traj.records.size(); ++k)
        drift = std::max(drift, max_abs_diff(traj.records[k].allocation, limit));
    if (drift > tol) {
        throw NotApplicableError("lambda_structure: allocation moved by " + std::to_string(drift) +
                                 " over the window");
    }

    const EquilibriumCertificate ref = scaled_reference(traj, c);
    ClassStructure out;
    out.partition = equivalence_classes(limit);
    const std::size_t n_classes = out.partition.classes.size();
    out.lambda.assign(n_classes, {});

    for (std::size_t k = begin; k < traj.records.size(); ++k) {
        const TrajectoryRecord& r = traj.records[k];
        out.times.push_back(r.t);
        for (std::size_t cls = 0; cls < n_classes; ++cls) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            double sum = 0.0;
            for (std::size_t i : out.partition.classes[cls]) {
                const double ratio = r.prices[i] / ref.p_star[i];
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
                sum += ratio;
            }
            out.lambda[cls].push_back(sum / static_cast<double>(out.partition.classes[cls].size()));
            out.max_within_class_spread = std::max(out.max_within_class_spread, hi - lo);
        }
    }
    out.valid = out.max_within_class_spread <= tol;

    // Inter-class purchase graph.
    out.successors.assign(n_classes, {});
    std::vector<std::size_t> in_degree(n_classes, 0);
    for (std::size_t i = 0; i < limit.rows(); ++i) {
        for (std::size_t j = 0; j < limit.cols(); ++j) {
            if (limit(i, j) <= kSupportEpsilon) continue;
            auto& succ = out.successors[out.partition.class_of[i]];
            const std::size_t target = out.partition.class_of[j];
            if (std::find(succ.begin(), succ.end(), target) == succ.end()) succ.push_back(target);
        }
    }
    bool simple = true;
    for (auto& succ : out.successors) {
        std::sort(succ.begin(), succ.end());
        if (succ.size() != 1) simple = false;
        for (std::size_t t : succ) ++in_degree[t];
    }
    for (std::size_t d : in_degree) simple = simple && d == 1;
    if (simple && n_classes > 0) {
        std::size_t visited = 0;
        std::size_t cur = 0;
        do {
            cur = out.successors[cur].front();
            ++visited;
        } while (cur != 0 && visited <= n_classes);
        out.classes_form_cycle = cur == 0 && visited == n_classes;
    }
    return out;
}

CycleReport detect_cycle(const Trajectory& traj, std::size_t max_period, double tol) {
    const auto samples = regular_samples(traj);
    CycleReport report;
    const std::size_t n = samples.size();
    const std::size_t tail = n / 3;
    const std::size_t kmax = std::min(max_period, tail);
    if (kmax == 0) return report;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= kmax; ++k) {
        double dev = 0.0;
        for (std::size_t m = n - tail; m < n; ++m)
            dev = std::max(dev, max_abs_diff(cycle_signal(*samples[m]), cycle_signal(*samples[m - k])));
        best = std::min(best, dev);
        if (dev <= tol) {
            std::size_t anchor = n - k;
            while (anchor > 0 &&
                   max_abs_diff(cycle_signal(*samples[anchor - 1 + k]),
                                cycle_signal(*samples[anchor - 1])) <= tol)
                --anchor;
            report.detected = true;
            report.period = k * traj.stride;
            report.anchor_t = samples[anchor]->t;
            report.max_deviation = dev;
            return report;
        }
    }
    report.max_deviation = best;
    return report;
}

ConvergenceSeries convergence_metrics(const Trajectory& traj, const EquilibriumCertificate& c) {
    ConvergenceSeries out;
    if (traj.records.empty()) return out;
    const std::size_t n = traj.records.size();
    const std::size_t tail = std::max<std::size_t>(n / 3, 1);

    Matrix average(traj.records.back().allocation.rows(), traj.records.back().allocation.cols());
    for (std::size_t k = n - tail; k < n; ++k) {
        const auto src = traj.records[k].allocation.values();
        auto dst = average.values();
        for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += src[e];
    }
    for (double& v : average.values()) v /= static_cast<double>(tail);

    const EquilibriumCertificate ref = scaled_reference(traj, c);
    const bool has_prices = traj.mode != Mode::kTft;
    for (const auto& r : traj.records) {
        out.t.push_back(r.t);
        out.utility_gap.push_back(max_abs_diff(r.utilities, ref.u_star));
        out.allocation_distance.push_back(max_abs_diff(r.allocation, average));
        if (has_prices) out.price_distance.push_back(max_abs_diff(r.prices, ref.p_star));
    }
    return out;
}

double price_log_potential(std::span<const double> prices, std::span<const double> p_star) {
    double acc = 0.0;
    for (std::size_t j = 0; j < prices.size(); ++j) {
        if (p_star[j] <= 0.0) continue;
        acc += p_star[j] * std::log(prices[j] / p_star[j]);
    }
    return acc;
}

}  // namespace tradepost

#include "tradepost/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tradepost/dynamics.hpp"
#include "tradepost/errors.hpp"
#include "tradepost/random.hpp"
#include "tradepost/union_find.hpp"

namespace tradepost {

namespace {

constexpr double kOracleAlpha = 0.5;
// Fixed-point detection on a unit of money; a few ulps above round-off.
constexpr double kFixedPointTol = 1e-15;

MarketState oracle_start(const Economy& e, const std::optional<std::uint64_t>& seed) {
    const std::size_t n = e.size();
    Vector budget(n, 1.0);
    Matrix weights(n, n);
    std::optional<CounterRng> rng;
    if (seed) rng.emplace(*seed, 0x65717569ULL);
    for (std::size_t i = 0; i < n; ++i) {
        if (rng) budget[i] = rng->uniform(0.25, 1.75);
        for (std::size_t j = 0; j < n; ++j)
            if (e.valuations(i, j) > 0.0) weights(i, j) = rng ? rng->uniform(0.25, 1.75) : 1.0;
    }
    double total_budget = 0.0;
    for (double b : budget) total_budget += b;

    // Budget and bank hold equal halves of each player's money.
    MarketState s;
    s.bids = Matrix(n, n);
    s.budget.resize(n);
    s.bank.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double b = budget[i] / (2.0 * total_budget);
        const double row = weights.row_sum(i);
        for (std::size_t j = 0; j < n; ++j) s.bids(i, j) = b * weights(i, j) / row;
        s.budget[i] = s.bids.row_sum(i);
        s.bank[i] = matching_bank(s.budget[i], kOracleAlpha);
    }
    return s;
}

EquilibriumCertificate certificate_from_state(const Economy& e, const MarketState& s) {
    const Exchange ex = allocate(s.bids);
    const std::size_t n = e.size();
    double total = 0.0;
    for (double p : ex.prices) total += p;
    Vector p_star(n);
    for (std::size_t j = 0; j < n; ++j) p_star[j] = ex.prices[j] / total;

    Matrix x = ex.allocation;
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (x(i, j) <= kSupportEpsilon) x(i, j) = 0.0;
            col += x(i, j);
        }
        if (col > 0.0)
            for (std::size_t i = 0; i < n; ++i) x(i, j) /= col;
    }
    return make_certificate(e, std::move(p_star), std::move(x));
}

void check_well_formed(const Economy& e, const EquilibriumCertificate& c) {
    const std::size_t n = e.size();
    if (c.x_star.rows() != n || c.x_star.cols() != n || c.p_star.size() != n)
        throw MalformedCertificateError("certificate shape does not match the economy");
    for (double v : c.x_star.values())
        if (!std::isfinite(v) || v < 0.0)
            throw MalformedCertificateError("certificate allocation has a negative or non-finite entry");
    for (std::size_t j = 0; j < n; ++j)
        if (!std::isfinite(c.p_star[j]) || c.p_star[j] <= 0.0)
            throw MalformedCertificateError("certificate price p_" + std::to_string(j + 1) +
                                            " is not positive");
}

}  // namespace

double ResidualReport::worst() const { return std::max({clearing, budget, optimality, support}); }

EquilibriumCertificate make_certificate(const Economy& e, Vector p_star, Matrix x_star) {
    const std::size_t n = e.size();
    EquilibriumCertificate c;
    c.u_star.assign(n, 0.0);
    c.b_star = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            c.u_star[i] += e.valuations(i, j) * x_star(i, j);
            c.b_star(i, j) = p_star[j] * x_star(i, j);
        }
    }
    c.p_star = std::move(p_star);
    c.x_star = std::move(x_star);
    return c;
}

ResidualReport verify_equilibrium(const Economy& e, const EquilibriumCertificate& c, double support_eps) {
    check_well_formed(e, c);
    const std::size_t n = e.size();
    const Matrix& x = c.x_star;
    const Vector& p = c.p_star;
    ResidualReport r;

    for (std::size_t j = 0; j < n; ++j) r.clearing = std::max(r.clearing, std::abs(x.col_sum(j) - 1.0));

    for (std::size_t i = 0; i < n; ++i) {
        double spent = 0.0;
        double u = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            spent += p[j] * x(i, j);
            u += e.valuations(i, j) * x(i, j);
        }
        r.budget = std::max(r.budget, std::abs(spent - p[i]));

        const double bpb = u / p[i];
        const double scale = bpb > 0.0 ? bpb : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ratio = e.valuations(i, j) / p[j];
            r.optimality = std::max(r.optimality, std::max(0.0, ratio - bpb) / scale);
            if (x(i, j) > support_eps) r.support = std::max(r.support, std::abs(ratio - bpb) / scale);
        }
    }
    return r;
}

EquilibriumCertificate solve_equilibrium(const Economy& e, const SolveOptions& opts) {
    const std::size_t n = e.size();
    const Vector alpha(n, kOracleAlpha);
    MarketState s = oracle_start(e, opts.seed);

    for (std::size_t iter = 1; iter <= opts.max_iters; ++iter) {
        StepOutcome out = advance(e, s, alpha);
        double gap = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            gap = std::max(gap, std::abs(s.budget[i] - out.exchange.prices[i]));
        const double change = max_abs_diff(out.next.bids, s.bids);
        s = std::move(out.next);

        const bool settled = gap <= kFixedPointTol && change <= kFixedPointTol;
        if (settled || iter == opts.max_iters) {
            EquilibriumCertificate c = certificate_from_state(e, s);
            const ResidualReport r = verify_equilibrium(e, c);
            if (r.accepted(opts.tol)) return c;
            if (iter == opts.max_iters) {
                throw NonConvergenceError("solve_equilibrium: no certificate within " +
                                              std::to_string(opts.max_iters) + " iterations",
                                          std::move(c), r, iter);
            }
        }
    }
    // max_iters == 0
    EquilibriumCertificate c = certificate_from_state(e, s);
    const ResidualReport r = verify_equilibrium(e, c);
    if (r.accepted(opts.tol)) return c;
    throw NonConvergenceError("solve_equilibrium: iteration budget is zero", std::move(c), r, 0);
}

double eg_objective(std::span<const double> weights, std::span<const double> u) {
    if (weights.size() != u.size()) throw std::invalid_argument("eg_objective: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (weights[i] == 0.0) continue;
        if (!(u[i] > 0.0))
            throw std::domain_error("eg_objective: u_" + std::to_string(i + 1) + " is not positive");
        acc += weights[i] * std::log(u[i]);
    }
    return acc;
}

ResidualReport cross_pair_check(const Economy& e, const Matrix& x, const EquilibriumCertificate& c,
                                double tol) {
    const std::size_t n = e.size();
    if (x.rows() != n || x.cols() != n)
        throw HypothesisNotMetError("cross_pair_check: allocation shape does not match the economy");
    for (double v : x.values())
        if (!(v >= 0.0)) throw HypothesisNotMetError("cross_pair_check: negative allocation entry");
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(x.col_sum(j) - 1.0) > tol)
            throw HypothesisNotMetError("cross_pair_check: good " + std::to_string(j + 1) +
                                        " is not fully allocated");
    }
    const EquilibriumCertificate paired = make_certificate(e, c.p_star, x);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(paired.u_star[i] - c.u_star[i]) > tol * std::max(1.0, std::abs(c.u_star[i])))
            throw HypothesisNotMetError("cross_pair_check: player " + std::to_string(i + 1) +
                                        " does not receive its equilibrium utility");
    }
    return verify_equilibrium(e, paired);
}

bool support_connected(const Matrix& x, double eps) {
    const std::size_t n = x.rows();
    if (n == 0) return true;
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (x(i, j) > eps) uf.unite(i, j);
    return uf.groups().size() == 1;
}

PriceRay price_ray_check(const Economy& e, const EquilibriumCertificate& c1,
                         const EquilibriumCertificate& c2, double tol) {
    if (!verify_equilibrium(e, c1).accepted(tol) || !verify_equilibrium(e, c2).accepted(tol))
        throw std::invalid_argument("price_ray_check: certificate fails verification");
    if (!support_connected(c1.x_star)) return PriceRay::kInapplicable;

    const std::size_t n = e.size();
    std::vector<double> ratios(n);
    for (std::size_t j = 0; j < n; ++j) ratios[j] = c1.p_star[j] / c2.p_star[j];
    std::vector<double> sorted = ratios;
    std::sort(sorted.begin(), sorted.end());
    const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    for (double r : ratios)
        if (std::abs(r - median) > tol) return PriceRay::kNotParallel;
    return PriceRay::kParallel;
}

}  // namespace tradepost

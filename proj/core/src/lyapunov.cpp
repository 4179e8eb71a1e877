#include "tradepost/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tradepost/dynamics.hpp"
#include "tradepost/errors.hpp"

namespace tradepost {

namespace {

double weighted_log_ratio(double w, double num, double den, const char* what) {
    if (w == 0.0) return 0.0;
    if (!(num > 0.0) || !(den > 0.0))
        throw InfiniteDivergenceError(std::string(what) + ": positive weight on a zero entry");
    return w * std::log(num / den);
}

}  // namespace

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (!(q[i] > 0.0))
            throw InfiniteDivergenceError("kl_divergence: p_" + std::to_string(i + 1) +
                                          " > 0 but q_" + std::to_string(i + 1) + " = 0");
        acc += p[i] * std::log(p[i] / q[i]);
    }
    return acc;
}

double f_value(const EquilibriumCertificate& c, const MarketState& s, const Economy& e) {
    return f_value(c, s, e.alpha);
}

double f_value(const EquilibriumCertificate& c, const MarketState& s, std::span<const double> alpha) {
    double log_f = kl_divergence(c.b_star.values(), s.bids.values());
    for (std::size_t i = 0; i < s.budget.size(); ++i) {
        if (alpha[i] == 1.0 || c.p_star[i] <= 0.0) continue;
        const double weight = (1.0 - alpha[i]) / alpha[i] * c.p_star[i];
        log_f += weighted_log_ratio(weight, c.p_star[i], s.budget[i], "f_value");
    }
    return log_f;
}

double g_value(const EquilibriumCertificate& c, std::span<const double> u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (c.p_star[i] <= 0.0) continue;
        if (!(u[i] > 0.0) || !(c.u_star[i] > 0.0))
            throw std::domain_error("g_value: non-positive utility for player " +
                                    std::to_string(i + 1));
        acc += c.p_star[i] * std::log(u[i] / c.u_star[i]);
    }
    return acc;
}

double h_value(const EquilibriumCertificate& c, std::span<const double> prices,
               std::span<const double> budget, std::span<const double> alpha) {
    double acc = 0.0;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const double w = c.p_star[i];
        if (w <= 0.0 || alpha[i] == 1.0) continue;
        const double a = alpha[i];
        const double p = prices[i];
        const double b = budget[i];
        if (!(p > 0.0) || !(b > 0.0))
            throw std::domain_error("h_value: non-positive price or budget for player " +
                                    std::to_string(i + 1));
        const double mixed = a * p + (1.0 - a) * b;
        acc += w * (std::log(p) + (1.0 - a) / a * std::log(b) - std::log(mixed) / a);
    }
    return acc;
}

double kl_decomposition_residual(const Matrix& b, const Matrix& b_prime) {
    if (b.rows() != b_prime.rows() || b.cols() != b_prime.cols())
        throw std::invalid_argument("kl_decomposition_residual: shape mismatch");
    const Exchange ex = allocate(b);
    const Exchange ex2 = allocate(b_prime);
    double worst = 0.0;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        double lhs = 0.0;
        double alloc_term = 0.0;
        for (std::size_t i = 0; i < b.rows(); ++i) {
            if (b(i, j) <= 0.0) continue;
            if (!(b_prime(i, j) > 0.0))
                throw InfiniteDivergenceError("kl_decomposition_residual: support of b not contained in b'");
            lhs += b(i, j) * std::log(b_prime(i, j) / b(i, j));
            alloc_term += ex.allocation(i, j) *
                          std::log(ex2.allocation(i, j) / ex.allocation(i, j));
        }
        const double pj = ex.prices[j];
        const double rhs = pj > 0.0 ? pj * std::log(ex2.prices[j] / pj) + pj * alloc_term : 0.0;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double money_scale(const EquilibriumCertificate& c, const MarketState& s,
                   std::span<const double> alpha) {
    double money = 0.0;
    double reference = 0.0;
    for (std::size_t i = 0; i < s.budget.size(); ++i) {
        money += s.budget[i];
        if (alpha[i] < 1.0) money += s.bank[i];
        reference += c.p_star[i] / alpha[i];
    }
    if (!(reference > 0.0)) throw MalformedCertificateError("money_scale: zero equilibrium prices");
    return money / reference;
}

}  // namespace tradepost

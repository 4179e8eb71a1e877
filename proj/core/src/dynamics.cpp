#include "tradepost/dynamics.hpp"

#include <string>

#include "tradepost/errors.hpp"

namespace tradepost {

Exchange allocate(const Matrix& bids) {
    const std::size_t n = bids.rows();
    const std::size_t m = bids.cols();
    Exchange ex{Matrix(n, m), Vector(m, 0.0)};
    for (std::size_t j = 0; j < m; ++j) ex.prices[j] = bids.col_sum(j);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double b = bids(i, j);
            if (b > 0.0) ex.allocation(i, j) = b / ex.prices[j];
        }
    }
    return ex;
}

Vector utilities(const Economy& e, const Matrix& allocation) {
    const std::size_t n = allocation.rows();
    Vector u(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < allocation.cols(); ++j) s += e.valuations(i, j) * allocation(i, j);
        u[i] = s;
    }
    return u;
}

StepOutcome advance(const Economy& e, const MarketState& s, std::span<const double> alpha) {
    const std::size_t n = s.size();
    StepOutcome out;
    out.exchange = allocate(s.bids);
    out.utilities = utilities(e, out.exchange.allocation);

    MarketState& next = out.next;
    next.t = s.t + 1;
    next.bids = Matrix(n, n);
    next.budget.assign(n, 0.0);
    next.bank = s.bank;

    const Vector& p = out.exchange.prices;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == 1.0) {
            next.budget[i] = p[i];
        } else {
            const double money = p[i] + s.bank[i];
            next.budget[i] = alpha[i] * money;
            next.bank[i] = (1.0 - alpha[i]) * money;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const double u = out.utilities[i];
        const double budget = next.budget[i];
        if (!(u > 0.0)) {
            if (budget > 0.0) {
                throw DegenerateStateError(
                    "player " + std::to_string(i + 1) + " has budget but zero utility at t = " +
                        std::to_string(s.t),
                    i, s.t);
            }
            continue;
        }
        const double per_util = budget / u;
        for (std::size_t j = 0; j < n; ++j) {
            const double x = out.exchange.allocation(i, j);
            if (x <= 0.0) continue;
            double b = e.valuations(i, j) * x * per_util;
            if (b < kUnderflowFloor) {
                if (b > 0.0) out.clamped = true;
                b = 0.0;
            }
            next.bids(i, j) = b;
        }
    }
    return out;
}

MarketState pr_step(const Economy& e, const MarketState& s) {
    const Vector ones(s.size(), 1.0);
    return advance(e, s, ones).next;
}

MarketState lazy_pr_step(const Economy& e, const MarketState& s) {
    return advance(e, s, e.alpha).next;
}

TftState tft_from_bids(const Matrix& bids) {
    const Exchange ex = allocate(bids);
    return TftState{0, ex.allocation.transposed()};
}

Matrix tft_allocation(const TftState& s) { return s.fractions.transposed(); }

Vector tft_utilities(const Economy& e, const TftState& s) {
    const std::size_t n = s.fractions.rows();
    Vector u(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) acc += s.fractions(k, i) * e.valuations(i, k);
        u[i] = acc;
    }
    return u;
}

TftState tft_step(const Economy& e, const TftState& s) {
    const std::size_t n = s.fractions.rows();
    const Vector u = tft_utilities(e, s);
    TftState next{s.t + 1, Matrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        if (!(u[i] > 0.0)) {
            throw DegenerateStateError("tit-for-tat: player " + std::to_string(i + 1) +
                                           " receives nothing it values at t = " +
                                           std::to_string(s.t),
                                       i, s.t);
        }
        for (std::size_t j = 0; j < n; ++j)
            next.fractions(i, j) = s.fractions(j, i) * e.valuations(i, j) / u[i];
    }
    return next;
}

}  // namespace tradepost

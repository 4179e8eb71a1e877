#pragma once

// Reference implementations used only by the tests. They are written from
// the model's definitions with plain loops and share no code with the
// library beyond the Matrix container.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "tradepost/economy.hpp"
#include "tradepost/matrix.hpp"

namespace oracle {

using tradepost::Matrix;
using tradepost::Vector;

struct Market {
    Vector prices;
    Matrix allocation;
};

inline Market trade(const Matrix& b) {
    const std::size_t n = b.rows();
    Market m{Vector(n, 0.0), Matrix(n, n)};
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) m.prices[j] += b(i, j);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (m.prices[j] > 0.0) m.allocation(i, j) = b(i, j) / m.prices[j];
    return m;
}

inline Vector utilities(const Matrix& a, const Matrix& x) {
    Vector u(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) u[i] += a(i, j) * x(i, j);
    return u;
}

/// Plain step: B_i' = p_i, b_ij' = a_ij x_ij / u_i * B_i'.
inline Matrix pr_bids(const Matrix& a, const Matrix& b) {
    const Market m = trade(b);
    const Vector u = utilities(a, m.allocation);
    Matrix next(b.rows(), b.cols());
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            next(i, j) = a(i, j) * m.allocation(i, j) / u[i] * m.prices[i];
    return next;
}

/// Lazy step written with the budget recursion B' = alpha p + (1 - alpha) B,
/// valid when every bank matches its budget.
inline Matrix lazy_bids(const Matrix& a, const Matrix& b, const Vector& alpha) {
    const Market m = trade(b);
    const Vector u = utilities(a, m.allocation);
    Matrix next(b.rows(), b.cols());
    for (std::size_t i = 0; i < b.rows(); ++i) {
        double budget = 0.0;
        for (std::size_t j = 0; j < b.cols(); ++j) budget += b(i, j);
        const double spend = alpha[i] * m.prices[i] + (1.0 - alpha[i]) * budget;
        for (std::size_t j = 0; j < b.cols(); ++j) next(i, j) = a(i, j) * m.allocation(i, j) / u[i] * spend;
    }
    return next;
}

/// Tit-for-tat on good-major fractions: y'(i, j) = y(j, i) a_ij / u_i.
inline Matrix tft_fractions(const Matrix& a, const Matrix& y) {
    const std::size_t n = a.rows();
    Vector u(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) u[i] += y(k, i) * a(i, k);
    Matrix next(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) next(i, j) = y(j, i) * a(i, j) / u[i];
    return next;
}

// Lyapunov quantities in long double, straight from their definitions.
// p_star and b_star must already be at the scale of the state's money.

inline long double log_f(const Matrix& b_star, const Vector& p_star, const Matrix& b, const Vector& budget,
                         const Vector& alpha) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            if (b_star(i, j) > 0.0)
                s += (long double)b_star(i, j) * std::log((long double)b_star(i, j) / (long double)b(i, j));
    for (std::size_t i = 0; i < budget.size(); ++i)
        if (alpha[i] < 1.0 && p_star[i] > 0.0)
            s += (1.0L - alpha[i]) / alpha[i] * p_star[i] * std::log((long double)p_star[i] / budget[i]);
    return s;
}

inline long double log_g(const Vector& p_star, const Vector& u_star, const Vector& u) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (p_star[i] > 0.0) s += (long double)p_star[i] * std::log((long double)u[i] / u_star[i]);
    return s;
}

inline long double log_h(const Vector& p_star, const Vector& p, const Vector& budget, const Vector& alpha) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const long double a = alpha[i];
        const long double mixed = a * p[i] + (1.0L - a) * budget[i];
        s += p_star[i] * (std::log((long double)p[i]) + (1.0L - a) / a * std::log((long double)budget[i]) -
                          std::log(mixed) / a);
    }
    return s;
}

/// Both sides of KL(b || b') = sum_j p_j log(p_j / p'_j) + sum_j p_j KL(x_.j || x'_.j).
inline long double kl_split_gap(const Matrix& b, const Matrix& bp) {
    const Market m = trade(b);
    const Market mp = trade(bp);
    long double lhs = 0.0L;
    long double rhs = 0.0L;
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            if (b(i, j) > 0.0) lhs += (long double)b(i, j) * std::log((long double)b(i, j) / bp(i, j));
    for (std::size_t j = 0; j < b.cols(); ++j) {
        rhs += (long double)m.prices[j] * std::log((long double)m.prices[j] / mp.prices[j]);
        for (std::size_t i = 0; i < b.rows(); ++i)
            if (m.allocation(i, j) > 0.0)
                rhs += (long double)m.prices[j] * m.allocation(i, j) *
                       std::log((long double)m.allocation(i, j) / mp.allocation(i, j));
    }
    return std::fabs(lhs - rhs);
}

/// Worst violation of clearing, budget balance and bang-per-buck optimality,
/// the last two relative to the player's u_i / p_i.
inline double equilibrium_violation(const Matrix& a, const Vector& p, const Matrix& x, double support_eps = 1e-7) {
    const std::size_t n = a.rows();
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) col += x(i, j);
        worst = std::max(worst, std::fabs(col - 1.0));
    }
    for (std::size_t i = 0; i < n; ++i) {
        double spent = 0.0;
        double u = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            spent += p[j] * x(i, j);
            u += a(i, j) * x(i, j);
        }
        worst = std::max(worst, std::fabs(spent - p[i]));
        const double ratio = u / p[i];
        for (std::size_t j = 0; j < n; ++j) {
            const double bang = a(i, j) / p[j];
            worst = std::max(worst, (bang - ratio) / ratio);
            if (x(i, j) > support_eps) worst = std::max(worst, std::fabs(bang - ratio) / ratio);
        }
    }
    return worst;
}

/// Reachability closure of "i and k both hold more than eps of a common good",
/// returned as a class label per player (the smallest member of its class).
inline std::vector<std::size_t> co_purchase_closure(const Matrix& x, double eps = 1e-7) {
    const std::size_t n = x.rows();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        reach[i][i] = true;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < x.cols(); ++j)
                if (x(i, j) > eps && x(k, j) > eps) reach[i][k] = true;
    }
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (reach[i][m] && reach[m][k]) reach[i][k] = true;
    std::vector<std::size_t> label(n);
    for (std::size_t i = 0; i < n; ++i) {
        label[i] = i;
        for (std::size_t k = 0; k < i; ++k)
            if (reach[i][k]) {
                label[i] = k;
                break;
            }
    }
    return label;
}

/// Strictly positive random bids, scaled so total money is 1.
inline Matrix random_bids(std::size_t n, std::mt19937_64& rng, const Matrix* support = nullptr) {
    std::uniform_real_distribution<double> d(0.05, 1.0);
    Matrix b(n, n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (support && (*support)(i, j) <= 0.0) continue;
            b(i, j) = d(rng);
            total += b(i, j);
        }
    for (double& v : b.values()) v /= total;
    return b;
}

inline Matrix random_valuations(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(1.0, 100.0);
    Matrix a(n, n);
    for (double& v : a.values()) v = d(rng);
    return a;
}

/// A random feasible allocation: every column is a point of the simplex.
inline Matrix random_allocation(std::size_t n, std::mt19937_64& rng) {
    std::exponential_distribution<double> d(1.0);
    Matrix x(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) col += (x(i, j) = d(rng));
        for (std::size_t i = 0; i < n; ++i) x(i, j) /= col;
    }
    return x;
}

}  // namespace oracle

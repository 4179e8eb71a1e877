#include "tradepost/economy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tradepost/errors.hpp"

namespace tradepost {

Economy::Economy(Matrix a, Vector savings_fractions)
    : valuations(std::move(a)), alpha(std::move(savings_fractions)) {}

Economy::Economy(Matrix a) : valuations(std::move(a)), alpha(valuations.rows(), 1.0) {}

bool ValidationReport::has(const std::string& code) const {
    return std::any_of(issues.begin(), issues.end(),
                       [&](const ValidationIssue& i) { return i.code == code; });
}

ValidationReport validate_economy(const Economy& e) {
    ValidationReport report;
    auto add = [&](std::string code, std::string msg) {
        report.issues.push_back({std::move(code), std::move(msg)});
    };

    const Matrix& a = e.valuations;
    const std::size_t n = a.rows();
    if (n == 0) {
        add("empty", "economy has no players");
        return report;
    }
    if (a.cols() != n) {
        add("shape", "valuation matrix is " + std::to_string(n) + "x" + std::to_string(a.cols()) +
                         ", expected square");
        return report;
    }
    if (e.alpha.size() != n) {
        add("alpha_size", "alpha has " + std::to_string(e.alpha.size()) + " entries, expected " +
                              std::to_string(n));
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = a(i, j);
            if (!std::isfinite(v)) {
                add("non_finite", "a[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) +
                                      "] is not finite");
            } else if (v < 0.0) {
                add("negative_valuation", "a[" + std::to_string(i + 1) + "][" +
                                              std::to_string(j + 1) + "] is negative");
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        bool any = false;
        for (std::size_t j = 0; j < n; ++j) any = any || a(i, j) > 0.0;
        if (!any) add("zero_row", "player " + std::to_string(i + 1) + " values no good");
    }
    for (std::size_t j = 0; j < n; ++j) {
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) any = any || a(i, j) > 0.0;
        if (!any) add("zero_column", "good " + std::to_string(j + 1) + " is valued by nobody");
    }
    for (std::size_t i = 0; i < e.alpha.size(); ++i) {
        const double al = e.alpha[i];
        if (!(al > 0.0 && al <= 1.0)) {
            add("alpha_range", "alpha[" + std::to_string(i + 1) + "] = " + std::to_string(al) +
                                   " is outside (0, 1]");
        }
    }
    return report;
}

double MarketState::total_money() const {
    double total = 0.0;
    for (double v : budget) total += v;
    for (double v : bank) total += v;
    return total;
}

MarketState make_state(Matrix bids, Vector bank) {
    MarketState s;
    s.budget.resize(bids.rows());
    for (std::size_t i = 0; i < bids.rows(); ++i) s.budget[i] = bids.row_sum(i);
    s.bank = bank.empty() ? Vector(bids.rows(), 0.0) : std::move(bank);
    s.bids = std::move(bids);
    return s;
}

ValidationReport validate_state(const Economy& e, const MarketState& s, double tol) {
    ValidationReport report;
    auto add = [&](std::string code, std::string msg) {
        report.issues.push_back({std::move(code), std::move(msg)});
    };
    const std::size_t n = e.size();
    if (s.bids.rows() != n || s.bids.cols() != n || s.budget.size() != n || s.bank.size() != n) {
        add("shape", "state dimensions do not match the economy");
        return report;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double b = s.bids(i, j);
            if (!std::isfinite(b) || b < 0.0) {
                add("negative_bid", "bid b[" + std::to_string(i + 1) + "][" +
                                        std::to_string(j + 1) + "] is negative or not finite");
            } else if (b > 0.0 && e.valuations(i, j) <= 0.0) {
                add("off_support_bid", "player " + std::to_string(i + 1) +
                                           " bids on good " + std::to_string(j + 1) +
                                           " which it does not value");
            }
        }
        const double rs = s.bids.row_sum(i);
        if (std::abs(rs - s.budget[i]) > tol * std::max(1.0, std::abs(s.budget[i]))) {
            add("budget_mismatch",
                "bids of player " + std::to_string(i + 1) + " do not sum to its budget");
        }
        if (!(s.bank[i] >= 0.0) || !std::isfinite(s.bank[i]))
            add("negative_bank", "bank of player " + std::to_string(i + 1) + " is negative");
    }
    return report;
}

MarketState normalize_money(const MarketState& s) {
    const double total = s.total_money();
    if (!(total > 0.0) || !std::isfinite(total))
        throw DegenerateStateError("normalize_money: state holds no money");
    if (total == 1.0) return s;
    const double scale = 1.0 / total;
    MarketState out = s;
    for (double& v : out.bids.values()) v *= scale;
    for (double& v : out.budget) v *= scale;
    for (double& v : out.bank) v *= scale;
    return out;
}

double matching_bank(double budget, double alpha) { return (1.0 - alpha) * budget / alpha; }

EquilibriumCertificate rescale(const EquilibriumCertificate& c, double factor) {
    EquilibriumCertificate out = c;
    for (double& v : out.p_star) v *= factor;
    for (double& v : out.b_star.values()) v *= factor;
    return out;
}

}  // namespace tradepost

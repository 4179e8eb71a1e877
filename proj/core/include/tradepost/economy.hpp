#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tradepost/matrix.hpp"

namespace tradepost {

/// A linear exchange economy: player i owns one unit of good i and values
/// a unit of good j at valuations(i, j). alpha[i] is the fraction of its
/// money player i spends each round under the lazy dynamic.
struct Economy {
    Matrix valuations;
    Vector alpha;

    Economy() = default;
    Economy(Matrix a, Vector savings_fractions);
    /// All players spend everything (alpha = 1).
    explicit Economy(Matrix a);

    std::size_t size() const { return valuations.rows(); }
};

struct ValidationIssue {
    std::string code;
    std::string message;
};

/// Empty report means valid.
struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const { return issues.empty(); }
    bool has(const std::string& code) const;
};

ValidationReport validate_economy(const Economy& e);

/// Money held by each player at time t. Rows of `bids` sum to `budget`;
/// `bank` holds the saved share under the lazy dynamic.
struct MarketState {
    std::size_t t = 0;
    Matrix bids;
    Vector budget;
    Vector bank;

    std::size_t size() const { return bids.rows(); }
    double total_money() const;
};

/// Builds a state at t = 0 whose budgets are the row sums of `bids`.
MarketState make_state(Matrix bids, Vector bank = {});

/// Checks shapes, non-negativity, row-sum/budget agreement and that bids
/// stay on the valuation support.
ValidationReport validate_state(const Economy& e, const MarketState& s, double tol = 1e-12);

/// Scales bids, budgets and bank by one factor so total money is 1.
/// Throws DegenerateStateError when the state holds no money.
MarketState normalize_money(const MarketState& s);

/// Bank balance that matches a spending budget under savings fraction alpha:
/// (1 - alpha) * budget / alpha.
double matching_bank(double budget, double alpha);

/// Equilibrium allocation/prices/utilities with bids b*_ij = p*_j x*_ij.
/// Prices are normalized to sum to 1 unless explicitly rescaled.
struct EquilibriumCertificate {
    Matrix x_star;
    Vector p_star;
    Vector u_star;
    Matrix b_star;
};

/// Same certificate with prices and bids multiplied by `factor`.
EquilibriumCertificate rescale(const EquilibriumCertificate& c, double factor);

}  // namespace tradepost

#pragma once

#include <span>

#include "tradepost/economy.hpp"
#include "tradepost/matrix.hpp"

namespace tradepost {

// KL-divergence instrumentation for the (lazy) proportional response dynamic.
// All quantities are natural logs of the corresponding products; a term whose
// weight is zero contributes nothing.

/// sum_{i: p_i > 0} p_i log(p_i / q_i). Throws InfiniteDivergenceError when
/// p_i > 0 meets q_i <= 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// log f = KL(b* || b(t)) + sum_i ((1 - alpha_i) / alpha_i) p*_i log(p*_i / B_i(t)).
double f_value(const EquilibriumCertificate& c, const MarketState& s, const Economy& e);

/// Same as f_value with explicit savings fractions (alpha = 1 drops the budget term).
double f_value(const EquilibriumCertificate& c, const MarketState& s, std::span<const double> alpha);

/// log g = sum_{i: p*_i > 0} p*_i log(u_i / u*_i). Never positive for a
/// feasible allocation.
double g_value(const EquilibriumCertificate& c, std::span<const double> u);

/// log h = sum_i p*_i [log p_i + ((1 - a_i)/a_i) log B_i - (1/a_i) log(a_i p_i + (1 - a_i) B_i)].
/// Identically zero when every alpha_i is 1.
double h_value(const EquilibriumCertificate& c, std::span<const double> prices,
               std::span<const double> budget, std::span<const double> alpha);

/// Max over goods of |sum_i b_ij log(b'_ij / b_ij) - p_j log(p'_j / p_j)
///   - p_j sum_i x_ij log(x'_ij / x_ij)|.
double kl_decomposition_residual(const Matrix& b, const Matrix& b_prime);

/// Factor that rescales a normalized certificate to the money circulating in
/// `s`: sum_i B_i / alpha_i over sum_i p*_i / alpha_i. With this scaling the
/// Lyapunov value is a divergence between vectors of equal mass, so it is
/// non-negative and vanishes exactly at the matching equilibrium.
double money_scale(const EquilibriumCertificate& c, const MarketState& s,
                   std::span<const double> alpha);

}  // namespace tradepost

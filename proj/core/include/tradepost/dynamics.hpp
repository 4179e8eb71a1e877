#pragma once

#include <cstddef>

#include "tradepost/economy.hpp"
#include "tradepost/matrix.hpp"

namespace tradepost {

/// Outcome of the trading-post mechanism for one round of bids.
struct Exchange {
    Matrix allocation;  // x(i, j): share of good j received by player i
    Vector prices;      // p_j: total money bid on good j
};

/// Bids below this are treated as underflowed and set to zero.
inline constexpr double kUnderflowFloor = 1e-300;

/// Goods nobody bids on have price zero and an all-zero allocation column.
Exchange allocate(const Matrix& bids);

/// u_i = sum_j a_ij x_ij.
Vector utilities(const Economy& e, const Matrix& allocation);

/// Everything one bid-update step produces: the quantities observed at the
/// current state and the successor state.
struct StepOutcome {
    Exchange exchange;
    Vector utilities;
    MarketState next;
    bool clamped = false;  // some bid underflowed and was zeroed
};

/// One lazy proportional-response step with explicit savings fractions.
///
/// Player i's money after selling is m_i = p_i + bank_i; it spends
/// alpha_i * m_i next round and banks the rest. On states whose bank matches
/// the budget ((1 - alpha) B / alpha) this is B' = alpha p + (1 - alpha) B.
/// A player with alpha_i == 1 spends exactly its revenue and never touches
/// its bank, so alpha = 1 reproduces the plain dynamic bit for bit.
StepOutcome advance(const Economy& e, const MarketState& s, std::span<const double> alpha);

/// Plain proportional response: B_i(t+1) = p_i(t).
MarketState pr_step(const Economy& e, const MarketState& s);

/// Lazy proportional response using e.alpha.
MarketState lazy_pr_step(const Economy& e, const MarketState& s);

/// Moneyless tit-for-tat state. fractions(j, i) is the share of good j given
/// to player i (good-first index order); every row sums to one.
struct TftState {
    std::size_t t = 0;
    Matrix fractions;
};

/// Tit-for-tat fractions matching a bid matrix: y(j, i) = b_ij / p_j.
TftState tft_from_bids(const Matrix& bids);

/// Player-major allocation x(i, j) = y(j, i).
Matrix tft_allocation(const TftState& s);

/// u_i = sum_k y(k, i) a_ik.
Vector tft_utilities(const Economy& e, const TftState& s);

/// y(i, j) <- y(j, i) a_ij / u_i. Throws DegenerateStateError when some u_i is zero.
TftState tft_step(const Economy& e, const TftState& s);

}  // namespace tradepost

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "tradepost/economy.hpp"
#include "tradepost/matrix.hpp"

namespace tradepost {

/// Allocation entries at or below this are treated as off the equilibrium support.
inline constexpr double kSupportEpsilon = 1e-7;

/// How far a certificate is from satisfying the equilibrium conditions.
/// Optimality and support residuals are relative to the player's u_i / p_i.
struct ResidualReport {
    double clearing = 0.0;    // max_j |sum_i x_ij - 1|
    double budget = 0.0;      // max_i |sum_j p_j x_ij - p_i|
    double optimality = 0.0;  // max_ij max(0, a_ij/p_j - u_i/p_i) / (u_i/p_i)
    double support = 0.0;     // max over x_ij > eps of |a_ij/p_j - u_i/p_i| / (u_i/p_i)

    double worst() const;
    bool accepted(double tol) const { return worst() <= tol; }
};

struct SolveOptions {
    double tol = 1e-8;
    std::size_t max_iters = 1'000'000;
    /// Unset: uniform bids over each row's support from equal budgets.
    /// Set: randomized positive bids and budgets drawn from this seed.
    std::optional<std::uint64_t> seed;
};

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, EquilibriumCertificate best, ResidualReport residuals,
                        std::size_t iterations)
        : std::runtime_error(what),
          best_(std::move(best)),
          residuals_(residuals),
          iterations_(iterations) {}

    const EquilibriumCertificate& best() const { return best_; }
    const ResidualReport& residuals() const { return residuals_; }
    std::size_t iterations() const { return iterations_; }

private:
    EquilibriumCertificate best_;
    ResidualReport residuals_;
    std::size_t iterations_;
};

/// Computes an equilibrium by running the lazy dynamic with alpha = 1/2 to
/// its fixed point. The result has sum(p*) = 1, allocation entries at or
/// below kSupportEpsilon rounded to zero, and passes verify_equilibrium at
/// opts.tol. Throws NonConvergenceError when the budget runs out.
EquilibriumCertificate solve_equilibrium(const Economy& e, const SolveOptions& opts = {});

/// Builds a certificate from prices and an allocation: u* = sum_j a x*,
/// b*_ij = p*_j x*_ij. Prices are used as given.
EquilibriumCertificate make_certificate(const Economy& e, Vector p_star, Matrix x_star);

/// Checks market clearing, budget balance and bang-per-buck optimality of
/// (c.x_star, c.p_star). Utilities are recomputed from the allocation.
/// Throws MalformedCertificateError on shape mismatch, non-finite entries or
/// a non-positive price.
ResidualReport verify_equilibrium(const Economy& e, const EquilibriumCertificate& c,
                                  double support_eps = kSupportEpsilon);

/// sum_i w_i log u_i. Throws std::domain_error when w_i > 0 and u_i <= 0.
double eg_objective(std::span<const double> weights, std::span<const double> u);

/// Pairs an allocation giving every player its equilibrium utility with the
/// certificate's prices and verifies the pair. Throws HypothesisNotMetError
/// when x is infeasible or misses u* by more than tol.
ResidualReport cross_pair_check(const Economy& e, const Matrix& x, const EquilibriumCertificate& c,
                                double tol);

enum class PriceRay { kParallel, kNotParallel, kInapplicable };

/// Undirected graph on agents with an edge i - j whenever x_ij > eps.
bool support_connected(const Matrix& x, double eps = kSupportEpsilon);

/// Whether two verified certificates have proportional prices. Returns
/// kInapplicable when c1's support graph is disconnected, since prices need
/// not lie on one ray then. Throws std::invalid_argument when either
/// certificate fails verification at tol.
PriceRay price_ray_check(const Economy& e, const EquilibriumCertificate& c1,
                         const EquilibriumCertificate& c2, double tol);

}  // namespace tradepost

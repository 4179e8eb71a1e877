#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tradepost/economy.hpp"
#include "tradepost/equilibrium.hpp"
#include "tradepost/trajectory.hpp"

namespace tradepost {

/// Result of searching a trajectory's tail for a periodic orbit.
/// period == 1 means the sampled signal converged to a fixed point.
struct CycleReport {
    bool detected = false;
    std::size_t period = 0;   // in time steps
    std::size_t anchor_t = 0; // first time from which the period holds to the end
    double max_deviation = 0.0;
};

struct Partition {
    std::vector<std::vector<std::size_t>> classes;
    std::vector<std::size_t> class_of;
};

/// Transitive closure of "i and k both hold more than eps of some good".
Partition equivalence_classes(const Matrix& x, double eps = kSupportEpsilon);

/// Per-class price-to-equilibrium ratios over the tail of a trajectory.
struct ClassStructure {
    Partition partition;
    std::vector<std::size_t> times;
    /// lambda[c][k]: mean of p_i(t)/p*_i over players i in class c at times[k].
    std::vector<std::vector<double>> lambda;
    /// Largest max - min of p_i(t)/p*_i within one class at one time.
    double max_within_class_spread = 0.0;
    bool valid = false;
    /// successors[c]: classes owning goods that class c buys.
    std::vector<std::vector<std::size_t>> successors;
    /// Every class buys from exactly one class, is bought from by exactly
    /// one, and the successor chain visits all classes.
    bool classes_form_cycle = false;
};

/// Builds classes from the final allocation and measures the within-class
/// spread of p_i(t)/p*_i over the last `window` records, with p* rescaled to
/// the trajectory's money. Throws NotApplicableError when the allocation
/// still moves by more than tol over the window.
ClassStructure lambda_structure(const Trajectory& traj, const EquilibriumCertificate& c,
                                std::size_t window, double tol);

/// Compares the sampled signal (prices, or the allocation for tit-for-tat)
/// at lags 1..max_period over the trailing third of the records and reports
/// the smallest lag whose max-norm deviation is within tol.
CycleReport detect_cycle(const Trajectory& traj, std::size_t max_period = 64, double tol = 1e-8);

struct ConvergenceSeries {
    std::vector<std::size_t> t;
    Vector utility_gap;          // max_i |u_i(t) - u*_i|
    Vector allocation_distance;  // max_ij |x_ij(t) - trailing-average x_ij|
    Vector price_distance;       // max_j |p_j(t) - p*_j|, p* at the run's money; empty for tft
};

ConvergenceSeries convergence_metrics(const Trajectory& traj, const EquilibriumCertificate& c);

/// c rescaled to the money of the trajectory's first record.
EquilibriumCertificate scaled_reference(const Trajectory& traj, const EquilibriumCertificate& c);

/// sum_j p*_j log(p_j / p*_j); constant along a limit cycle of the plain dynamic.
double price_log_potential(std::span<const double> prices, std::span<const double> p_star);

}  // namespace tradepost

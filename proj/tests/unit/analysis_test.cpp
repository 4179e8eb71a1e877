#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tradepost/analysis.hpp"
#include "tradepost/errors.hpp"

using namespace tradepost;

namespace {

const Matrix kSwap{{0, 1}, {1, 0}};
const Matrix kCycleStart{{0, 1.0 / 3}, {2.0 / 3, 0}};

Trajectory cycling_run(std::size_t steps) {
    RunOptions opts;
    opts.steps = steps;
    return run(Economy(kSwap), make_state(kCycleStart), Mode::kPr, opts);
}

/// Players in blocks of sizes 3/4/3; block m values only block m + 1.
Economy three_component_economy(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(1.0, 100.0);
    const std::vector<std::size_t> block{0, 0, 0, 1, 1, 1, 1, 2, 2, 2};
    Matrix a(10, 10);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j)
            if (block[j] == (block[i] + 1) % 3) a(i, j) = d(rng);
    return Economy(a);
}

MarketState uniform_start(const Economy& e) {
    const std::size_t n = e.size();
    Matrix b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t support = 0;
        for (std::size_t j = 0; j < n; ++j) support += e.valuations(i, j) > 0;
        for (std::size_t j = 0; j < n; ++j)
            if (e.valuations(i, j) > 0) b(i, j) = 1.0 / double(n * support);
    }
    return make_state(b);
}

}  // namespace

TEST(EquivalenceClasses, SwapAllocation) {
    const Partition p = equivalence_classes(kSwap);
    ASSERT_EQ(p.classes.size(), 2u);
    EXPECT_EQ(p.class_of, (std::vector<std::size_t>{0, 1}));
}

TEST(EquivalenceClasses, SharedGoodsMergeEveryone) {
    EXPECT_EQ(equivalence_classes(Matrix(4, 4, 0.25)).classes.size(), 1u);
}

TEST(EquivalenceClasses, MatchesBruteForceClosure) {
    std::mt19937_64 rng(51);
    std::bernoulli_distribution keep(0.15);
    for (int rep = 0; rep < 50; ++rep) {
        Matrix x(8, 8);
        for (double& v : x.values()) v = keep(rng) ? 0.5 : 0.0;
        const Partition p = equivalence_classes(x);
        const auto label = oracle::co_purchase_closure(x);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t k = 0; k < 8; ++k)
                EXPECT_EQ(p.class_of[i] == p.class_of[k], label[i] == label[k]);
    }
}

TEST(EquivalenceClasses, ThreeComponentEquilibrium) {
    const Economy e = three_component_economy(52);
    const EquilibriumCertificate c = solve_equilibrium(e);
    const Partition p = equivalence_classes(c.x_star);
    const auto label = oracle::co_purchase_closure(c.x_star);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(p.class_of[i] == p.class_of[k], label[i] == label[k]);
    // Buyers never share a class across components.
    const std::vector<std::size_t> block{0, 0, 0, 1, 1, 1, 1, 2, 2, 2};
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t k = 0; k < 10; ++k)
            if (p.class_of[i] == p.class_of[k]) EXPECT_EQ(block[i], block[k]);
}

TEST(DetectCycle, BidCyclingHasPeriodTwo) {
    const CycleReport r = detect_cycle(cycling_run(60));
    EXPECT_TRUE(r.detected);
    EXPECT_EQ(r.period, 2u);
    EXPECT_LE(r.max_deviation, 1e-12);
}

TEST(DetectCycle, LazyRunConverges) {
    const Economy e(kSwap, {0.5, 0.5});
    RunOptions opts;
    opts.steps = 400;
    const Trajectory t = run(e, make_state(kCycleStart), Mode::kLazy, opts);
    const CycleReport r = detect_cycle(t);
    EXPECT_TRUE(r.detected);
    EXPECT_EQ(r.period, 1u);
}

TEST(DetectCycle, TitForTatInstance) {
    const Matrix a{{0, 6, 4}, {3, 0, 9}, {9, 6, 0}};
    const Matrix y0{{0.0, 0.2805339037254016, 0.7194660962745985},
                    {0.273923422472049, 0.0, 0.726076577527951},
                    {0.491752727261851, 0.5082472727381491, 0.0}};
    RunOptions opts;
    opts.steps = 60;
    const CycleReport r = detect_cycle(run_tft(Economy(a), TftState{0, y0}, opts));
    EXPECT_TRUE(r.detected);
    EXPECT_EQ(r.period, 2u);
}

TEST(DetectCycle, TooFewRecords) {
    EXPECT_FALSE(detect_cycle(cycling_run(0)).detected);
}

TEST(LambdaStructure, BidCyclingAlternates) {
    const Trajectory t = cycling_run(20);
    const ClassStructure s = lambda_structure(t, solve_equilibrium(Economy(kSwap)), 10, 1e-9);
    EXPECT_TRUE(s.valid);
    ASSERT_EQ(s.lambda.size(), 2u);
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        const bool even = s.times[k] % 2 == 0;
        EXPECT_NEAR(s.lambda[0][k], even ? 4.0 / 3 : 2.0 / 3, 1e-12);
        EXPECT_NEAR(s.lambda[1][k], even ? 2.0 / 3 : 4.0 / 3, 1e-12);
    }
    EXPECT_TRUE(s.classes_form_cycle);
}

TEST(LambdaStructure, ConvergedLazyRunHasUnitRatios) {
    // Equilibrium prices are unique up to scale only when the support graph
    // is connected, so draw until it is.
    std::mt19937_64 rng(53);
    Economy e;
    EquilibriumCertificate c;
    do {
        e = Economy(oracle::random_valuations(4, rng), Vector(4, 0.5));
        c = solve_equilibrium(e);
    } while (!support_connected(c.x_star));
    MarketState s0 = make_state(oracle::random_bids(4, rng));
    for (std::size_t i = 0; i < 4; ++i) s0.bank[i] = matching_bank(s0.budget[i], 0.5);
    RunOptions opts;
    opts.steps = 3000;
    const Trajectory t = run(e, s0, Mode::kLazy, opts);
    const ClassStructure s = lambda_structure(t, c, 50, 1e-6);
    for (const auto& series : s.lambda)
        for (double v : series) EXPECT_NEAR(v, 1.0, 1e-6);
}

TEST(LambdaStructure, DisconnectedSupportKeepsRatiosWithinClasses) {
    // Same draw as above without the connectivity filter: the lazy limit is
    // an equilibrium whose prices differ from the oracle's by one factor per
    // class.
    std::mt19937_64 rng(53);
    const Economy e(oracle::random_valuations(4, rng), Vector(4, 0.5));
    const EquilibriumCertificate c = solve_equilibrium(e);
    ASSERT_FALSE(support_connected(c.x_star));
    MarketState s0 = make_state(oracle::random_bids(4, rng));
    for (std::size_t i = 0; i < 4; ++i) s0.bank[i] = matching_bank(s0.budget[i], 0.5);
    RunOptions opts;
    opts.steps = 3000;
    const Trajectory t = run(e, s0, Mode::kLazy, opts);
    const ClassStructure s = lambda_structure(t, c, 50, 1e-6);
    EXPECT_TRUE(s.valid);
    EXPECT_LE(s.max_within_class_spread, 1e-9);
    const TrajectoryRecord& last = t.records.back();
    const EquilibriumCertificate limit = make_certificate(e, last.prices, last.allocation);
    EXPECT_TRUE(verify_equilibrium(e, limit).accepted(1e-8));
}

TEST(LambdaStructure, ThreeComponentCycle) {
    const Economy e = three_component_economy(54);
    const EquilibriumCertificate c = solve_equilibrium(e);
    RunOptions opts;
    opts.steps = 500;
    const Trajectory t = run(e, uniform_start(e), Mode::kPr, opts);
    const ClassStructure s = lambda_structure(t, c, 100, 1e-3);
    EXPECT_TRUE(s.valid);
    EXPECT_LE(s.max_within_class_spread, 1e-3);

    const ConvergenceSeries m = convergence_metrics(t, c);
    EXPECT_LE(m.utility_gap.back(), 1e-3);
    EXPECT_LE(m.allocation_distance.back(), 1e-3);
}

TEST(LambdaStructure, UnsettledAllocationIsNotApplicable) {
    std::mt19937_64 rng(55);
    const Economy e(oracle::random_valuations(4, rng));
    RunOptions opts;
    opts.steps = 5;
    const Trajectory t = run(e, make_state(oracle::random_bids(4, rng)), Mode::kPr, opts);
    EXPECT_THROW(lambda_structure(t, solve_equilibrium(e), 6, 1e-9), NotApplicableError);
}

TEST(ConvergenceMetrics, CyclingRun) {
    const Trajectory t = cycling_run(30);
    const ConvergenceSeries m = convergence_metrics(t, solve_equilibrium(Economy(kSwap)));
    for (std::size_t k = 0; k < m.t.size(); ++k) {
        EXPECT_EQ(m.utility_gap[k], 0.0);
        EXPECT_EQ(m.allocation_distance[k], 0.0);
        EXPECT_NEAR(m.price_distance[k], 1.0 / 6, 1e-12);
    }
}

TEST(ConvergenceMetrics, ConvergedLazyRun) {
    const Economy e(Matrix{{38, 51}, {79, 75}}, {0.5, 0.5});
    RunOptions opts;
    opts.steps = 2000;
    const Trajectory t = run(e, make_state(Matrix(2, 2, 0.25), {0.5, 0.5}), Mode::kLazy, opts);
    const ConvergenceSeries m = convergence_metrics(t, solve_equilibrium(e));
    EXPECT_LE(m.utility_gap.back(), 1e-6);
    EXPECT_LE(m.allocation_distance.back(), 1e-6);
    EXPECT_LE(m.price_distance.back(), 1e-6);
}

TEST(PriceLogPotential, ConstantOnBidCycle) {
    const Trajectory t = cycling_run(10);
    const Vector p_star{0.5, 0.5};
    const double v0 = price_log_potential(t.records[0].prices, p_star);
    for (const auto& r : t.records) EXPECT_NEAR(price_log_potential(r.prices, p_star), v0, 1e-15);
    EXPECT_NEAR(v0, 0.5 * std::log(4.0 / 3) + 0.5 * std::log(2.0 / 3), 1e-15);
}

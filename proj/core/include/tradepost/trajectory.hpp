#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tradepost/dynamics.hpp"
#include "tradepost/economy.hpp"

namespace tradepost {

enum class Mode { kPr, kLazy, kTft };

std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view s);

/// Which time steps a run keeps in memory. The initial and final steps are
/// always kept.
struct RecordPolicy {
    enum class Kind { kAll, kEvery, kLast };
    Kind kind = Kind::kAll;
    std::size_t every = 1;

    static RecordPolicy all() { return {}; }
    static RecordPolicy every_k(std::size_t k) { return {Kind::kEvery, k == 0 ? 1 : k}; }
    static RecordPolicy last() { return {Kind::kLast, 0}; }

    bool keeps(std::size_t t, std::size_t final_t) const;
    /// Spacing between regularly kept steps; 0 when only endpoints are kept.
    std::size_t stride() const;

    /// Parses "all", "last" or "every:K".
    static std::optional<RecordPolicy> parse(std::string_view s);
};

struct LyapunovValues {
    double log_f = 0.0;
    double log_g = 0.0;
    double log_h = 0.0;
    /// |log f(t+1) - log f(t) - log g(t) - log h(t)|; absent at the final step.
    std::optional<double> identity_residual;
};

/// Quantities observed at one time step. For tit-for-tat runs `bids`,
/// `budget`, `bank` and `prices` are empty and `fractions` holds y.
struct TrajectoryRecord {
    std::size_t t = 0;
    Matrix bids;
    Vector budget;
    Vector bank;
    Vector prices;
    Matrix allocation;
    Vector utilities;
    Matrix fractions;
    std::optional<LyapunovValues> lyapunov;
};

/// Worst-case Lyapunov diagnostics over every step of a run, recorded or not.
struct LyapunovSummary {
    std::size_t steps = 0;  // transitions checked against the step identity
    double max_identity_residual = 0.0;
    double max_increase = -std::numeric_limits<double>::infinity();  // max log f(t+1) - log f(t)
    double max_log_g = -std::numeric_limits<double>::infinity();
    double max_log_h = -std::numeric_limits<double>::infinity();
    double min_log_f = std::numeric_limits<double>::infinity();
};

struct Trajectory {
    Economy economy;
    Mode mode = Mode::kPr;
    Vector alpha;  // savings fractions the dynamic actually used
    std::size_t stride = 1;
    std::vector<TrajectoryRecord> records;
    std::size_t final_t = 0;
    bool clamped = false;
    /// Certificate rescaled to the run's money, when one was attached.
    std::optional<EquilibriumCertificate> reference;
    std::optional<LyapunovSummary> lyapunov;
};

/// Read-only view of the current step, handed to stop predicates.
struct StepView {
    std::size_t t;
    const MarketState* state;  // null for tit-for-tat
    const TftState* tft;       // null for money dynamics
    const Vector& prices;
    const Matrix& allocation;
    const Vector& utilities;
};

struct RunOptions {
    std::size_t steps = 0;
    RecordPolicy record = RecordPolicy::all();
    /// Normalized certificate; when set, Lyapunov values are tracked.
    const EquilibriumCertificate* certificate = nullptr;
    /// Checked at every step after observation; returning true ends the run there.
    std::function<bool(const StepView&)> stop_when;
};

/// Runs the plain (kPr) or lazy (kLazy) dynamic for up to opts.steps steps.
/// Step failures propagate as DegenerateStateError carrying the time index.
Trajectory run(const Economy& e, const MarketState& s0, Mode mode, const RunOptions& opts);

/// Runs tit-for-tat. Lyapunov tracking does not apply and is ignored.
Trajectory run_tft(const Economy& e, const TftState& y0, const RunOptions& opts);

}  // namespace tradepost

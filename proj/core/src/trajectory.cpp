#include "tradepost/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "tradepost/errors.hpp"
#include "tradepost/lyapunov.hpp"

namespace tradepost {

std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::kPr: return "pr";
        case Mode::kLazy: return "lazy";
        case Mode::kTft: return "tft";
    }
    return "?";
}

std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "pr") return Mode::kPr;
    if (s == "lazy") return Mode::kLazy;
    if (s == "tft") return Mode::kTft;
    return std::nullopt;
}

bool RecordPolicy::keeps(std::size_t t, std::size_t final_t) const {
    if (t == 0 || t == final_t) return true;
    switch (kind) {
        case Kind::kAll: return true;
        case Kind::kEvery: return t % every == 0;
        case Kind::kLast: return false;
    }
    return false;
}

std::size_t RecordPolicy::stride() const {
    switch (kind) {
        case Kind::kAll: return 1;
        case Kind::kEvery: return every;
        case Kind::kLast: return 0;
    }
    return 0;
}

std::optional<RecordPolicy> RecordPolicy::parse(std::string_view s) {
    if (s == "all") return all();
    if (s == "last") return last();
    constexpr std::string_view prefix = "every:";
    if (s.substr(0, prefix.size()) == prefix) {
        std::size_t k = 0;
        const auto rest = s.substr(prefix.size());
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
        if (ec != std::errc{} || ptr != rest.data() + rest.size() || k == 0) return std::nullopt;
        return every_k(k);
    }
    return std::nullopt;
}

namespace {

class LyapunovTracker {
public:
    LyapunovTracker(const EquilibriumCertificate& reference, std::span<const double> alpha)
        : reference_(reference), alpha_(alpha) {}

    LyapunovValues observe(const MarketState& s, const Exchange& ex, const Vector& u) {
        LyapunovValues v;
        v.log_f = f_value(reference_, s, alpha_);
        v.log_g = g_value(reference_, u);
        v.log_h = h_value(reference_, ex.prices, s.budget, alpha_);
        if (previous_) {
            const double residual =
                std::abs(v.log_f - previous_->log_f - previous_->log_g - previous_->log_h);
            summary_.max_identity_residual = std::max(summary_.max_identity_residual, residual);
            summary_.max_increase = std::max(summary_.max_increase, v.log_f - previous_->log_f);
            last_residual_ = residual;
            ++summary_.steps;
        } else {
            last_residual_.reset();
        }
        summary_.max_log_g = std::max(summary_.max_log_g, v.log_g);
        summary_.max_log_h = std::max(summary_.max_log_h, v.log_h);
        summary_.min_log_f = std::min(summary_.min_log_f, v.log_f);
        previous_ = v;
        return v;
    }

    /// Residual closing the step that ended at the last observed state.
    std::optional<double> last_residual() const { return last_residual_; }
    const LyapunovSummary& summary() const { return summary_; }

private:
    const EquilibriumCertificate& reference_;
    std::span<const double> alpha_;
    std::optional<LyapunovValues> previous_;
    std::optional<double> last_residual_;
    LyapunovSummary summary_;
};

}  // namespace

Trajectory run(const Economy& e, const MarketState& s0, Mode mode, const RunOptions& opts) {
    if (mode == Mode::kTft) throw std::invalid_argument("run: use run_tft for tit-for-tat");

    Trajectory traj;
    traj.economy = e;
    traj.mode = mode;
    traj.alpha = mode == Mode::kPr ? Vector(e.size(), 1.0) : e.alpha;
    traj.stride = opts.record.stride();

    std::optional<LyapunovTracker> tracker;
    if (opts.certificate != nullptr) {
        traj.reference = rescale(*opts.certificate, money_scale(*opts.certificate, s0, traj.alpha));
        tracker.emplace(*traj.reference, traj.alpha);
    }

    MarketState state = s0;
    const std::size_t final_t = s0.t + opts.steps;
    for (std::size_t t = s0.t;; ++t) {
        const bool last = t == final_t;
        StepOutcome out;
        if (last) {
            out.exchange = allocate(state.bids);
            out.utilities = utilities(e, out.exchange.allocation);
        } else {
            out = advance(e, state, traj.alpha);
            traj.clamped = traj.clamped || out.clamped;
        }

        std::optional<LyapunovValues> lyap;
        if (tracker) {
            lyap = tracker->observe(state, out.exchange, out.utilities);
            if (auto r = tracker->last_residual();
                r && !traj.records.empty() && traj.records.back().t + 1 == t &&
                traj.records.back().lyapunov) {
                traj.records.back().lyapunov->identity_residual = *r;
            }
        }

        const StepView view{t, &state, nullptr, out.exchange.prices, out.exchange.allocation,
                            out.utilities};
        const bool stop = !last && opts.stop_when && opts.stop_when(view);

        if (opts.record.keeps(t - s0.t, opts.steps) || stop) {
            TrajectoryRecord rec;
            rec.t = t;
            rec.bids = state.bids;
            rec.budget = state.budget;
            rec.bank = state.bank;
            rec.prices = std::move(out.exchange.prices);
            rec.allocation = std::move(out.exchange.allocation);
            rec.utilities = std::move(out.utilities);
            rec.lyapunov = lyap;
            traj.records.push_back(std::move(rec));
        }
        if (last || stop) {
            traj.final_t = t;
            break;
        }
        state = std::move(out.next);
    }
    if (tracker) traj.lyapunov = tracker->summary();
    return traj;
}

Trajectory run_tft(const Economy& e, const TftState& y0, const RunOptions& opts) {
    Trajectory traj;
    traj.economy = e;
    traj.mode = Mode::kTft;
    traj.alpha = Vector(e.size(), 1.0);
    traj.stride = opts.record.stride();

    TftState state = y0;
    const std::size_t final_t = y0.t + opts.steps;
    for (std::size_t t = y0.t;; ++t) {
        const bool last = t == final_t;
        Matrix x = tft_allocation(state);
        Vector u = tft_utilities(e, state);
        const Vector no_prices;
        const StepView view{t, nullptr, &state, no_prices, x, u};
        const bool stop = !last && opts.stop_when && opts.stop_when(view);

        if (opts.record.keeps(t - y0.t, opts.steps) || stop) {
            TrajectoryRecord rec;
            rec.t = t;
            rec.allocation = std::move(x);
            rec.utilities = std::move(u);
            rec.fractions = state.fractions;
            traj.records.push_back(std::move(rec));
        }
        if (last || stop) {
            traj.final_t = t;
            break;
        }
        state = tft_step(e, state);
    }
    return traj;
}

}  // namespace tradepost

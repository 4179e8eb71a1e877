#include "tradepost/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "tradepost/analysis.hpp"
#include "tradepost/cli/output.hpp"
#include "tradepost/cli/presets.hpp"
#include "tradepost/equilibrium.hpp"
#include "tradepost/errors.hpp"

namespace tradepost::cli {

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    write_file(path, doc.dump(2) + "\n");
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const NonConvergenceError& ex) {
        err << "error: " << ex.what() << " (worst residual " << ex.residuals().worst() << " after "
            << ex.iterations() << " iterations)\n";
        return kExitNonConvergence;
    } catch (const DegenerateStateError& ex) {
        err << "error: " << ex.what();
        if (ex.player()) err << " [player " << *ex.player() + 1 << "]";
        if (ex.time()) err << " [t = " << *ex.time() << "]";
        err << '\n';
        return kExitDegenerate;
    } catch (const InfiniteDivergenceError& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitDegenerate;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitValidation;
    }
}

std::string join_issues(const ValidationReport& r) {
    std::string out;
    for (const auto& issue : r.issues) out += "\n  " + issue.code + ": " + issue.message;
    return out;
}

std::string format_vector(const Vector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_number(v[i]);
    }
    return out + ")";
}

std::string format_classes(const Partition& p) {
    std::string out;
    for (const auto& cls : p.classes) {
        if (!out.empty()) out += ' ';
        out += '{';
        for (std::size_t k = 0; k < cls.size(); ++k) {
            if (k) out += ',';
            out += std::to_string(cls[k] + 1);
        }
        out += '}';
    }
    return out;
}

struct RunResult {
    Trajectory traj;
    std::optional<EquilibriumCertificate> certificate;
    CycleReport cycle;
    std::optional<ClassStructure> classes;
    nlohmann::json summary;
};

std::optional<EquilibriumCertificate> try_solve(const Economy& e, const ExperimentConfig& cfg,
                                                bool required, std::ostream* log) {
    try {
        return solve_equilibrium(e, SolveOptions{cfg.tol, SolveOptions{}.max_iters, std::nullopt});
    } catch (const NonConvergenceError&) {
        if (required) throw;
        if (log) *log << "warning: equilibrium oracle did not converge; metrics omitted\n";
        return std::nullopt;
    }
}

nlohmann::json summarize(const Trajectory& traj, const std::optional<EquilibriumCertificate>& cert,
                         const CycleReport& cycle, const std::optional<ClassStructure>& classes) {
    nlohmann::json s;
    s["mode"] = to_string(traj.mode);
    s["n"] = traj.economy.size();
    s["final_t"] = traj.final_t;
    s["alpha"] = traj.alpha;
    s["clamped"] = traj.clamped;

    const TrajectoryRecord& last = traj.records.back();
    nlohmann::json fin;
    fin["t"] = last.t;
    if (!last.prices.empty()) fin["prices"] = last.prices;
    fin["utilities"] = last.utilities;
    fin["allocation"] = to_json(last.allocation);
    s["final"] = std::move(fin);

    if (cert) {
        const EquilibriumCertificate ref = scaled_reference(traj, *cert);
        const ConvergenceSeries m = convergence_metrics(traj, *cert);
        s["equilibrium"] = {{"p_star", ref.p_star}, {"u_star", ref.u_star}};
        nlohmann::json metrics = {{"utility_gap", m.utility_gap.back()},
                                  {"allocation_distance", m.allocation_distance.back()}};
        metrics["price_distance"] =
            m.price_distance.empty() ? nlohmann::json(nullptr) : nlohmann::json(m.price_distance.back());
        s["metrics"] = std::move(metrics);
    } else {
        s["equilibrium"] = nullptr;
        s["metrics"] = nullptr;
    }
    s["lyapunov"] = traj.lyapunov ? to_json(*traj.lyapunov) : nlohmann::json(nullptr);
    s["cycle"] = to_json(cycle);
    s["classes"] = to_json(equivalence_classes(last.allocation));
    s["class_structure"] = classes ? to_json(*classes) : nlohmann::json(nullptr);
    return s;
}

RunResult execute(const Economy& e, const MarketState& s0, Mode mode, const ExperimentConfig& cfg,
                  std::optional<EquilibriumCertificate> cert) {
    RunOptions opts;
    opts.steps = cfg.steps;
    opts.record = cfg.record;
    if (cfg.with_lyapunov && cert && mode != Mode::kTft) opts.certificate = &*cert;

    RunResult r;
    r.traj = mode == Mode::kTft ? run_tft(e, tft_from_bids(s0.bids), opts) : run(e, s0, mode, opts);
    r.certificate = std::move(cert);
    r.cycle = detect_cycle(r.traj, cfg.max_period, cfg.cycle_tol);
    if (r.certificate && mode != Mode::kTft) {
        try {
            r.classes = lambda_structure(r.traj, *r.certificate, cfg.window, cfg.class_tol);
        } catch (const NotApplicableError&) {
        }
    }
    r.summary = summarize(r.traj, r.certificate, r.cycle, r.classes);
    return r;
}

MarketState checked_state(const Instance& inst, bool bank_match) {
    MarketState s = initial_state(inst, bank_match);
    const ValidationReport report = validate_state(inst.economy, s, 1e-9);
    if (!report.ok()) throw InstanceError("invalid initial state:" + join_issues(report));
    return s;
}

RunResult run_instance(const Instance& inst, const ExperimentConfig& cfg, std::ostream* log) {
    const MarketState s0 = checked_state(inst, cfg.bank_match);
    auto cert = try_solve(inst.economy, cfg, cfg.with_lyapunov, log);
    return execute(inst.economy, s0, cfg.mode, cfg, std::move(cert));
}

void print_report(std::ostream& log, const RunResult& r) {
    const auto& s = r.summary;
    auto row = [&log](const char* label, const std::string& value) {
        log << "  " << std::left << std::setw(20) << label << value << '\n';
    };
    row("mode", std::string(to_string(r.traj.mode)));
    row("players", std::to_string(r.traj.economy.size()));
    row("final t", std::to_string(r.traj.final_t));
    if (!r.traj.records.back().prices.empty()) row("final prices", format_vector(r.traj.records.back().prices));
    row("final utilities", format_vector(r.traj.records.back().utilities));
    if (!s["metrics"].is_null()) {
        row("utility gap", format_number(s["metrics"]["utility_gap"].get<double>()));
        row("allocation dist", format_number(s["metrics"]["allocation_distance"].get<double>()));
        if (!s["metrics"]["price_distance"].is_null())
            row("price distance", format_number(s["metrics"]["price_distance"].get<double>()));
    }
    if (r.traj.lyapunov) {
        row("max identity resid", format_number(r.traj.lyapunov->max_identity_residual));
        row("max log f increase", format_number(r.traj.lyapunov->max_increase));
    }
    if (r.cycle.detected) {
        row("cycle", "period " + std::to_string(r.cycle.period) + " from t = " + std::to_string(r.cycle.anchor_t) +
                         " (deviation " + format_number(r.cycle.max_deviation) + ")");
    } else {
        row("cycle", "none detected");
    }
    row("classes", format_classes(equivalence_classes(r.traj.records.back().allocation)));
    if (r.classes) {
        row("class spread", format_number(r.classes->max_within_class_spread));
        row("classes form cycle", r.classes->classes_form_cycle ? "yes" : "no");
    }
    if (r.traj.clamped) row("note", "bids were clamped at the underflow floor");
}

std::string csv_text(const Trajectory& traj) {
    std::ostringstream out;
    write_trajectory_csv(out, traj);
    return out.str();
}

int run_one(const ExperimentConfig& cfg, std::ostream& log, bool write_csv, const char* summary_name) {
    const Instance inst = resolve_instance(cfg);
    const RunResult r = run_instance(inst, cfg, &log);
    if (write_csv) write_file(cfg.out / "trajectory.csv", csv_text(r.traj));
    write_json(cfg.out / summary_name, r.summary);
    print_report(log, r);
    log << "wrote " << (cfg.out / summary_name).string() << '\n';
    return kExitOk;
}

/// Runs `body(seed_cfg)` for every seed of the sweep on cfg.jobs threads.
template <class F>
int sweep(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err, F&& body) {
    if (!cfg.generator) {
        err << "error: --sweep needs a generator spec (--n and --topology)\n";
        return kExitValidation;
    }
    const std::uint64_t base = cfg.seed.value_or(cfg.generator->seed);
    std::vector<int> codes(cfg.sweep, kExitOk);
    std::vector<std::string> lines(cfg.sweep);
    std::vector<std::string> errors(cfg.sweep);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t k = next++; k < cfg.sweep; k = next++) {
            ExperimentConfig one = cfg;
            one.sweep = 0;
            one.seed = base + k;
            one.out = cfg.out / ("seed_" + std::to_string(base + k));
            std::ostringstream one_log;
            std::ostringstream one_err;
            codes[k] = guarded(one_err, [&] { return body(one, one_log); });
            lines[k] = one_log.str();
            errors[k] = one_err.str();
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(cfg.jobs, 1, std::max<std::size_t>(cfg.sweep, 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    nlohmann::json index = nlohmann::json::array();
    int worst = kExitOk;
    for (std::size_t k = 0; k < cfg.sweep; ++k) {
        log << "seed " << base + k << ": exit " << codes[k] << '\n' << lines[k];
        err << errors[k];
        index.push_back({{"seed", base + k}, {"exit_code", codes[k]}});
        worst = std::max(worst, codes[k]);
    }
    write_json(cfg.out / "sweep.json", index);
    return worst;
}

}  // namespace

Instance resolve_instance(const ExperimentConfig& cfg) {
    const int sources = int(cfg.instance_path.has_value()) + int(cfg.preset.has_value()) +
                        int(cfg.generator.has_value());
    if (sources != 1)
        throw InstanceError("exactly one of --instance, --preset or a generator spec (--n) is required");

    Instance inst;
    if (cfg.instance_path) {
        inst = load_instance(*cfg.instance_path);
        if (cfg.seed) inst.seed = cfg.seed;
    } else if (cfg.preset) {
        auto found = preset(*cfg.preset);
        if (!found) {
            std::string names;
            for (auto name : preset_names()) names += " " + std::string(name);
            throw InstanceError("unknown preset '" + *cfg.preset + "'; available:" + names);
        }
        inst = std::move(*found);
        if (cfg.seed) inst.seed = cfg.seed;
    } else {
        GeneratorSpec spec = *cfg.generator;
        if (cfg.seed) spec.seed = *cfg.seed;
        try {
            inst = generate_instance(spec);
        } catch (const std::invalid_argument& ex) {
            throw InstanceError(ex.what());
        }
    }

    const std::size_t n = inst.economy.size();
    if (cfg.alpha) {
        if (cfg.alpha->size() == 1) {
            inst.economy.alpha.assign(n, cfg.alpha->front());
        } else if (cfg.alpha->size() == n) {
            inst.economy.alpha = *cfg.alpha;
        } else {
            throw InstanceError("--alpha needs 1 or " + std::to_string(n) + " values");
        }
    }
    const ValidationReport report = validate_economy(inst.economy);
    if (!report.ok()) throw InstanceError("invalid economy:" + join_issues(report));
    return inst;
}

int cmd_run(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err) {
    if (cfg.sweep > 0)
        return sweep(cfg, log, err, [](const ExperimentConfig& one, std::ostream& l) {
            return run_one(one, l, true, "summary.json");
        });
    return guarded(err, [&] { return run_one(cfg, log, true, "summary.json"); });
}

int cmd_analyze(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err) {
    if (cfg.sweep > 0)
        return sweep(cfg, log, err, [](const ExperimentConfig& one, std::ostream& l) {
            return run_one(one, l, false, "analysis.json");
        });
    return guarded(err, [&] { return run_one(cfg, log, false, "analysis.json"); });
}

int cmd_eq(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const Instance inst = resolve_instance(cfg);
        if (cfg.verify) {
            std::ifstream in(*cfg.verify);
            if (!in) throw IoError("cannot open certificate " + cfg.verify->string());
            nlohmann::json doc;
            try {
                in >> doc;
            } catch (const nlohmann::json::exception& ex) {
                throw MalformedCertificateError(std::string("cannot parse certificate: ") + ex.what());
            }
            const EquilibriumCertificate c = certificate_from_json(doc, inst.economy);
            const ResidualReport r = verify_equilibrium(inst.economy, c);
            const double tol = doc.value("tol", cfg.tol);
            log << "  residuals " << residuals_to_json(r).dump() << '\n';
            log << (r.accepted(tol) ? "  certificate accepted" : "  certificate rejected") << " at tol "
                << format_number(tol) << '\n';
            return r.accepted(tol) ? int(kExitOk) : int(kExitValidation);
        }
        const EquilibriumCertificate c =
            solve_equilibrium(inst.economy, SolveOptions{cfg.tol, SolveOptions{}.max_iters, std::nullopt});
        const ResidualReport r = verify_equilibrium(inst.economy, c);
        write_json(cfg.out / "certificate.json", certificate_to_json(c, cfg.tol, r));
        log << "  p*  " << format_vector(c.p_star) << '\n';
        log << "  u*  " << format_vector(c.u_star) << '\n';
        log << "  worst residual " << format_number(r.worst()) << '\n';
        log << "wrote " << (cfg.out / "certificate.json").string() << '\n';
        return int(kExitOk);
    });
}

int cmd_compare_tft(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const Instance inst = resolve_instance(cfg);
        const Matrix& a = inst.economy.valuations;
        const std::size_t n = a.rows();
        const MarketState s0 = checked_state(inst, false);
        auto cert = try_solve(inst.economy, cfg, cfg.with_lyapunov, &log);

        const Economy plain(a);
        const Economy lazy(a, Vector(n, 0.5));
        MarketState lazy0 = s0;
        for (std::size_t i = 0; i < n; ++i) lazy0.bank[i] = matching_bank(lazy0.budget[i], 0.5);

        const RunResult runs[3] = {execute(plain, s0, Mode::kPr, cfg, cert),
                                   execute(lazy, lazy0, Mode::kLazy, cfg, cert),
                                   execute(plain, s0, Mode::kTft, cfg, cert)};

        nlohmann::json summary;
        for (const RunResult& r : runs) {
            const std::string name(to_string(r.traj.mode));
            write_file(cfg.out / ("trajectory_" + name + ".csv"), csv_text(r.traj));
            summary[name] = r.summary;
            log << name << ":\n";
            print_report(log, r);
        }

        auto at_one = [](const Trajectory& t) -> const Matrix* {
            for (const auto& r : t.records)
                if (r.t == 1) return &r.allocation;
            return nullptr;
        };
        auto distance = [&](const RunResult& x, const RunResult& y) -> nlohmann::json {
            const Matrix* p = at_one(x.traj);
            const Matrix* q = at_one(y.traj);
            if (!p || !q) return nullptr;
            return max_abs_diff(*p, *q);
        };
        summary["allocation_difference_t1"] = {{"pr_lazy", distance(runs[0], runs[1])},
                                               {"pr_tft", distance(runs[0], runs[2])},
                                               {"lazy_tft", distance(runs[1], runs[2])}};
        write_json(cfg.out / "summary.json", summary);
        log << "wrote " << cfg.out.string() << "/trajectory_{pr,lazy,tft}.csv and summary.json\n";
        return int(kExitOk);
    });
}

int cmd_gen(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err) {
    auto one = [](const ExperimentConfig& c, std::ostream& l) {
        const Instance inst = resolve_instance(c);
        const auto path = c.out / "instance.json";
        write_json(path, instance_to_json(inst));
        l << "wrote " << path.string() << '\n';
        return int(kExitOk);
    };
    if (cfg.sweep > 0) return sweep(cfg, log, err, one);
    return guarded(err, [&] { return one(cfg, log); });
}

}  // namespace tradepost::cli

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tradepost/cli/commands.hpp"

namespace cli = tradepost::cli;

namespace {

struct Flags {
    std::string instance;
    std::string preset;
    std::size_t n = 0;
    std::string topology = "dense";
    std::vector<std::size_t> blocks;
    std::string mode = "pr";
    std::vector<double> alpha;
    std::size_t steps = 1000;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    bool with_lyapunov = false;
    bool bank_match = false;
    std::string out = ".";
    std::string record = "all";
    std::size_t jobs = 1;
    std::size_t sweep = 0;
    std::size_t max_period = 64;
    double cycle_tol = 1e-8;
    std::size_t window = 200;
    double class_tol = 1e-3;
    std::string verify;
};

void add_source(CLI::App* cmd, Flags& f) {
    cmd->add_option("--instance", f.instance, "instance JSON file");
    cmd->add_option("--preset", f.preset, "bipartite2, fig3, fig1-like, tft3, fig7 or symmetric3");
    cmd->add_option("--n", f.n, "generate an instance with this many players");
    cmd->add_option("--topology", f.topology, "dense, bipartite or cyclic:K")->capture_default_str();
    cmd->add_option("--blocks", f.blocks, "block sizes for a cyclic topology");
    cmd->add_option("--seed", f.seed, "generator seed, or seed for random initial bids");
    cmd->add_option("--alpha", f.alpha, "savings fraction: one value or one per player");
    cmd->add_option("--tol", f.tol, "equilibrium tolerance")->capture_default_str();
    cmd->add_option("--out", f.out, "output directory")->capture_default_str();
}

void add_dynamics(CLI::App* cmd, Flags& f) {
    cmd->add_option("--mode", f.mode, "pr, lazy or tft")->capture_default_str();
    cmd->add_option("--steps", f.steps, "number of steps")->capture_default_str();
    cmd->add_option("--record", f.record, "all, last or every:K")->capture_default_str();
    cmd->add_flag("--with-lyapunov", f.with_lyapunov, "track log f, log g, log h");
    cmd->add_flag("--bank-match", f.bank_match, "start each bank at (1 - alpha) B / alpha");
    cmd->add_option("--max-period", f.max_period, "longest cycle searched")->capture_default_str();
    cmd->add_option("--cycle-tol", f.cycle_tol, "cycle detection tolerance")->capture_default_str();
    cmd->add_option("--window", f.window, "records used for the class structure")->capture_default_str();
    cmd->add_option("--class-tol", f.class_tol, "allowed allocation drift over the window")->capture_default_str();
}

void add_sweep(CLI::App* cmd, Flags& f) {
    cmd->add_option("--sweep", f.sweep, "run this many consecutive generator seeds");
    cmd->add_option("--jobs", f.jobs, "seeds run concurrently during a sweep")->capture_default_str();
}

cli::ExperimentConfig to_config(const Flags& f, const CLI::App& cmd) {
    cli::ExperimentConfig cfg;
    if (!f.instance.empty()) cfg.instance_path = f.instance;
    if (!f.preset.empty()) cfg.preset = f.preset;
    if (cmd.count("--n") > 0) {
        auto topology = cli::Topology::parse(f.topology);
        if (!topology) throw CLI::ValidationError("--topology", "unknown topology '" + f.topology + "'");
        cli::GeneratorSpec spec;
        spec.n = f.n;
        spec.topology = *topology;
        spec.seed = f.seed;
        spec.blocks = f.blocks;
        cfg.generator = spec;
    }
    if (cmd.count("--seed") > 0) cfg.seed = f.seed;
    if (!f.alpha.empty()) cfg.alpha = f.alpha;

    auto mode = tradepost::parse_mode(f.mode);
    if (!mode) throw CLI::ValidationError("--mode", "expected pr, lazy or tft");
    cfg.mode = *mode;
    auto record = tradepost::RecordPolicy::parse(f.record);
    if (!record) throw CLI::ValidationError("--record", "expected all, last or every:K");
    cfg.record = *record;

    cfg.steps = f.steps;
    cfg.tol = f.tol;
    cfg.out = f.out;
    cfg.with_lyapunov = f.with_lyapunov;
    cfg.bank_match = f.bank_match;
    cfg.max_period = f.max_period;
    cfg.cycle_tol = f.cycle_tol;
    cfg.window = f.window;
    cfg.class_tol = f.class_tol;
    cfg.sweep = f.sweep;
    cfg.jobs = f.jobs;
    if (!f.verify.empty()) cfg.verify = f.verify;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trading-post dynamics: proportional response, lazy and tit-for-tat"};
    app.require_subcommand(1);
    Flags f;

    auto* run = app.add_subcommand("run", "simulate a dynamic and write trajectory.csv and summary.json");
    add_source(run, f);
    add_dynamics(run, f);
    add_sweep(run, f);

    auto* eq = app.add_subcommand("eq", "solve for an equilibrium and write certificate.json");
    add_source(eq, f);
    eq->add_option("--verify", f.verify, "re-verify an existing certificate instead");

    auto* analyze = app.add_subcommand("analyze", "simulate and report cycles and class structure");
    add_source(analyze, f);
    add_dynamics(analyze, f);
    add_sweep(analyze, f);

    auto* compare = app.add_subcommand("compare-tft", "run pr, lazy and tit-for-tat from the same start");
    add_source(compare, f);
    compare->add_option("--steps", f.steps, "number of steps")->capture_default_str();
    compare->add_option("--record", f.record, "all, last or every:K")->capture_default_str();
    compare->add_flag("--with-lyapunov", f.with_lyapunov, "track log f, log g, log h");
    compare->add_option("--max-period", f.max_period, "longest cycle searched")->capture_default_str();
    compare->add_option("--cycle-tol", f.cycle_tol, "cycle detection tolerance")->capture_default_str();

    auto* gen = app.add_subcommand("gen", "write an instance file");
    add_source(gen, f);
    add_sweep(gen, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitValidation;
    }

    const CLI::App* active = app.get_subcommands().front();
    cli::ExperimentConfig cfg;
    try {
        cfg = to_config(f, *active);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitValidation;
    }

    if (active == run) return cli::cmd_run(cfg, std::cout, std::cerr);
    if (active == eq) return cli::cmd_eq(cfg, std::cout, std::cerr);
    if (active == analyze) return cli::cmd_analyze(cfg, std::cout, std::cerr);
    if (active == compare) return cli::cmd_compare_tft(cfg, std::cout, std::cerr);
    return cli::cmd_gen(cfg, std::cout, std::cerr);
}

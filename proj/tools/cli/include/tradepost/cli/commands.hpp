#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "tradepost/cli/generator.hpp"
#include "tradepost/cli/instance.hpp"
#include "tradepost/trajectory.hpp"

namespace tradepost::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 1,
    kExitDegenerate = 2,
    kExitNonConvergence = 3,
};

struct ExperimentConfig {
    // Exactly one source: an instance file, a preset, or a generator spec.
    std::optional<std::filesystem::path> instance_path;
    std::optional<std::string> preset;
    std::optional<GeneratorSpec> generator;

    Mode mode = Mode::kPr;
    /// One entry applies to every player; otherwise one per player.
    std::optional<Vector> alpha;
    std::size_t steps = 1000;
    RecordPolicy record = RecordPolicy::all();
    std::filesystem::path out = ".";
    bool with_lyapunov = false;
    bool bank_match = false;
    /// Overrides the instance seed, or the generator seed.
    std::optional<std::uint64_t> seed;

    double tol = 1e-8;
    std::size_t max_period = 64;
    double cycle_tol = 1e-8;
    std::size_t window = 200;
    double class_tol = 1e-3;

    /// With a generator spec: run seeds seed, seed + 1, ... seed + sweep - 1.
    std::size_t sweep = 0;
    std::size_t jobs = 1;

    /// eq only: re-verify this certificate instead of solving.
    std::optional<std::filesystem::path> verify;
};

/// Resolves the configured source into an instance with overrides applied.
/// Throws InstanceError when the configuration is inconsistent.
Instance resolve_instance(const ExperimentConfig& cfg);

// Each command writes its files under cfg.out, prints a short report to
// `log` and maps failures to an ExitCode with a message on `err`.
int cmd_run(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_eq(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_analyze(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_compare_tft(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err);
int cmd_gen(const ExperimentConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace tradepost::cli

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tradepost/cli/instance.hpp"

namespace tradepost::cli {

struct Topology {
    enum class Kind { kDense, kBipartite, kCyclic };
    Kind kind = Kind::kDense;
    /// Cyclic only: block sizes in order; players in block m value only
    /// goods of block m + 1 (mod k).
    std::vector<std::size_t> blocks;
    std::size_t k = 0;

    /// "dense", "bipartite", "cyclic:K" or "cyclic-components(K)".
    static std::optional<Topology> parse(std::string_view s);
    std::string name() const;
};

struct GeneratorSpec {
    std::size_t n = 2;
    Topology topology;
    std::uint64_t seed = 0;
    /// Optional explicit block sizes for cyclic topologies (must sum to n).
    std::vector<std::size_t> blocks;
};

/// Near-equal split of n players into k blocks; leftover players go to the
/// blocks after the first (10 into 3 gives 3/4/3).
std::vector<std::size_t> default_blocks(std::size_t n, std::size_t k);

/// Block index of every player for a cyclic topology.
std::vector<std::size_t> block_of(const std::vector<std::size_t>& blocks);

/// Deterministic in the spec. Valuations on the support are uniform on
/// [1, 100]; b0 is uniform over each row's support from budgets 1/n.
/// Throws std::invalid_argument for infeasible specs.
Instance generate_instance(const GeneratorSpec& spec);

}  // namespace tradepost::cli

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "tradepost/cli/instance.hpp"
#include "tradepost/dynamics.hpp"

namespace tradepost::cli {

/// Built-in example economies:
///   bipartite2  two players who each value only the other's good, bids 1/3 vs 2/3
///   fig3        a = [[38, 51], [79, 75]] with uniform bids
///   fig1-like   ten players in cyclic blocks 3/4/3, valuations drawn from seed 1
///   tft3        three-player instance on which tit-for-tat cycles
///   fig7        a = [[1, 2], [1, 2]], b = [[0.4, 0.6], [0.9, 0.1]]
///   symmetric3  three players valuing every good at 1
std::optional<Instance> preset(std::string_view name);
std::vector<std::string_view> preset_names();

/// Printed starting fractions (good-major) of the tft3 instance.
TftState tft3_initial_fractions();
/// Fractions after one tit-for-tat step from tft3_initial_fractions().
Matrix tft3_next_fractions();

}  // namespace tradepost::cli

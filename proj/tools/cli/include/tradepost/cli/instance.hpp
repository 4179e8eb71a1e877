#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "tradepost/economy.hpp"

namespace tradepost::cli {

/// Parsed instance file: the economy plus optional initial conditions.
struct Instance {
    Economy economy;
    std::optional<Matrix> b0;
    std::optional<Vector> bank0;
    std::optional<std::uint64_t> seed;
};

/// Thrown for malformed instance documents and invalid economies.
class InstanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Instance parse_instance(const nlohmann::json& doc);
Instance load_instance(const std::filesystem::path& path);
nlohmann::json instance_to_json(const Instance& inst);

/// Initial state for the money dynamics: b0 when present, otherwise bids
/// spread over each row's support (uniformly, or with seeded random weights
/// when `seed` is set) from equal budgets. With `bank_match` every bank is
/// set to (1 - alpha) B / alpha. Money is normalized to total 1.
MarketState initial_state(const Instance& inst, bool bank_match = false);

nlohmann::json to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j, const char* field);

}  // namespace tradepost::cli

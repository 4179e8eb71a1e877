#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace tradepost {

/// A state the dynamics cannot advance from: zero total money, or a player
/// holding budget while deriving no utility from anything it bought.
class DegenerateStateError : public std::runtime_error {
public:
    explicit DegenerateStateError(const std::string& what,
                                  std::optional<std::size_t> player = std::nullopt,
                                  std::optional<std::size_t> time = std::nullopt)
        : std::runtime_error(what), player_(player), time_(time) {}

    std::optional<std::size_t> player() const { return player_; }
    std::optional<std::size_t> time() const { return time_; }

private:
    std::optional<std::size_t> player_;
    std::optional<std::size_t> time_;
};

/// p_i > 0 against q_i = 0 in a divergence, or the equivalent support
/// violation between equilibrium and current bids.
class InfiniteDivergenceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class MalformedCertificateError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The premise of a theorem-backed check does not hold for the given input.
class HypothesisNotMetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotApplicableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tradepost

#include "tradepost/cli/instance.hpp"

#include <fstream>

#include "tradepost/random.hpp"

namespace tradepost::cli {

nlohmann::json to_json(const Matrix& m) { return m.to_rows(); }

Matrix matrix_from_json(const nlohmann::json& j, const char* field) {
    if (!j.is_array()) throw InstanceError(std::string("field '") + field + "' must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& r : j) {
        if (!r.is_array()) throw InstanceError(std::string("field '") + field + "' must be an array of rows");
        rows.push_back(r.get<std::vector<double>>());
    }
    try {
        return Matrix::from_rows(rows);
    } catch (const std::invalid_argument&) {
        throw InstanceError(std::string("field '") + field + "' has rows of different lengths");
    }
}

Instance parse_instance(const nlohmann::json& doc) {
    try {
        if (!doc.contains("n") || !doc.contains("a"))
            throw InstanceError("instance needs fields 'n' and 'a'");
        const auto n = doc.at("n").get<std::size_t>();
        Matrix a = matrix_from_json(doc.at("a"), "a");
        if (a.rows() != n || a.cols() != n)
            throw InstanceError("'a' must be " + std::to_string(n) + "x" + std::to_string(n));

        Vector alpha(n, 1.0);
        if (doc.contains("alpha")) alpha = doc.at("alpha").get<Vector>();

        Instance inst{Economy(std::move(a), std::move(alpha)), std::nullopt, std::nullopt, std::nullopt};
        if (doc.contains("b0")) {
            Matrix b0 = matrix_from_json(doc.at("b0"), "b0");
            if (b0.rows() != n || b0.cols() != n)
                throw InstanceError("'b0' must be " + std::to_string(n) + "x" + std::to_string(n));
            inst.b0 = std::move(b0);
        }
        if (doc.contains("bank0")) {
            Vector bank = doc.at("bank0").get<Vector>();
            if (bank.size() != n) throw InstanceError("'bank0' must have " + std::to_string(n) + " entries");
            inst.bank0 = std::move(bank);
        }
        if (doc.contains("seed")) inst.seed = doc.at("seed").get<std::uint64_t>();
        return inst;
    } catch (const nlohmann::json::exception& ex) {
        throw InstanceError(std::string("malformed instance: ") + ex.what());
    }
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InstanceError("cannot open instance file " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& ex) {
        throw InstanceError("cannot parse " + path.string() + ": " + ex.what());
    }
    return parse_instance(doc);
}

nlohmann::json instance_to_json(const Instance& inst) {
    nlohmann::json doc;
    doc["n"] = inst.economy.size();
    doc["a"] = to_json(inst.economy.valuations);
    doc["alpha"] = inst.economy.alpha;
    if (inst.b0) doc["b0"] = to_json(*inst.b0);
    if (inst.bank0) doc["bank0"] = *inst.bank0;
    if (inst.seed) doc["seed"] = *inst.seed;
    return doc;
}

MarketState initial_state(const Instance& inst, bool bank_match) {
    const Economy& e = inst.economy;
    const std::size_t n = e.size();
    MarketState s;
    if (inst.b0) {
        s = make_state(*inst.b0);
    } else {
        std::optional<CounterRng> rng;
        if (inst.seed) rng.emplace(*inst.seed, 0x62696473ULL);
        Matrix bids(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (e.valuations(i, j) <= 0.0) continue;
                bids(i, j) = rng ? rng->uniform(0.5, 1.5) : 1.0;
                row += bids(i, j);
            }
            for (std::size_t j = 0; j < n; ++j) bids(i, j) /= row * static_cast<double>(n);
        }
        s = make_state(std::move(bids));
    }
    if (inst.bank0) s.bank = *inst.bank0;
    if (bank_match) {
        for (std::size_t i = 0; i < n; ++i) s.bank[i] = matching_bank(s.budget[i], e.alpha[i]);
    }
    return normalize_money(s);
}

}  // namespace tradepost::cli

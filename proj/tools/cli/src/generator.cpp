#include "tradepost/cli/generator.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>

#include "tradepost/random.hpp"

namespace tradepost::cli {

namespace {

std::optional<std::size_t> parse_size(std::string_view s) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

std::optional<Topology> Topology::parse(std::string_view s) {
    Topology t;
    if (s == "dense") return t;
    if (s == "bipartite") {
        t.kind = Kind::kBipartite;
        return t;
    }
    std::optional<std::size_t> k;
    if (s.starts_with("cyclic:")) {
        k = parse_size(s.substr(7));
    } else if (s.starts_with("cyclic-components(") && s.ends_with(")")) {
        k = parse_size(s.substr(18, s.size() - 19));
    }
    if (!k || *k == 0) return std::nullopt;
    t.kind = Kind::kCyclic;
    t.k = *k;
    return t;
}

std::string Topology::name() const {
    switch (kind) {
        case Kind::kDense: return "dense";
        case Kind::kBipartite: return "bipartite";
        case Kind::kCyclic: return "cyclic:" + std::to_string(k);
    }
    return "?";
}

std::vector<std::size_t> default_blocks(std::size_t n, std::size_t k) {
    std::vector<std::size_t> sizes(k, n / k);
    for (std::size_t r = 0; r < n % k; ++r) ++sizes[(1 + r) % k];
    return sizes;
}

std::vector<std::size_t> block_of(const std::vector<std::size_t>& blocks) {
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < blocks.size(); ++b) out.insert(out.end(), blocks[b], b);
    return out;
}

Instance generate_instance(const GeneratorSpec& spec) {
    const std::size_t n = spec.n;
    if (n == 0) throw std::invalid_argument("generator: n must be positive");

    std::vector<std::size_t> owner_block(n, 0);
    std::size_t k = 1;
    switch (spec.topology.kind) {
        case Topology::Kind::kDense: break;
        case Topology::Kind::kBipartite: {
            if (n < 2) throw std::invalid_argument("generator: bipartite needs n >= 2");
            owner_block = block_of({(n + 1) / 2, n / 2});
            k = 2;
            break;
        }
        case Topology::Kind::kCyclic: {
            k = spec.topology.k;
            if (k == 0 || k > n)
                throw std::invalid_argument("generator: cyclic-components(" + std::to_string(k) +
                                            ") needs 1 <= k <= n = " + std::to_string(n));
            std::vector<std::size_t> blocks = spec.blocks.empty() ? default_blocks(n, k) : spec.blocks;
            if (blocks.size() != k || std::accumulate(blocks.begin(), blocks.end(), std::size_t{0}) != n)
                throw std::invalid_argument("generator: block sizes must be k positive sizes summing to n");
            for (std::size_t b : blocks)
                if (b == 0) throw std::invalid_argument("generator: empty block");
            owner_block = block_of(blocks);
            break;
        }
    }

    CounterRng rng(spec.seed, 0x76616c73ULL);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double v = rng.uniform(1.0, 100.0);
            bool on = true;
            if (spec.topology.kind == Topology::Kind::kBipartite) on = owner_block[i] != owner_block[j];
            if (spec.topology.kind == Topology::Kind::kCyclic) on = owner_block[j] == (owner_block[i] + 1) % k;
            if (on) a(i, j) = v;
        }
    }

    Instance inst{Economy(std::move(a)), std::nullopt, std::nullopt, spec.seed};
    Matrix b0(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t support = 0;
        for (std::size_t j = 0; j < n; ++j) support += inst.economy.valuations(i, j) > 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (inst.economy.valuations(i, j) > 0.0)
                b0(i, j) = 1.0 / (static_cast<double>(n) * static_cast<double>(support));
    }
    inst.b0 = std::move(b0);
    return inst;
}

}  // namespace tradepost::cli

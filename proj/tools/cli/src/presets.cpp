#include "tradepost/cli/presets.hpp"

#include "tradepost/cli/generator.hpp"

namespace tradepost::cli {

TftState tft3_initial_fractions() {
    return TftState{0, Matrix{{0.0, 0.2805339037254016, 0.7194660962745985},
                              {0.273923422472049, 0.0, 0.726076577527951},
                              {0.491752727261851, 0.5082472727381491, 0.0}}};
}

Matrix tft3_next_fractions() {
    return Matrix{{0.0, 0.4552048517736218, 0.5447951482263783},
                  {0.1553967077250424, 0.0, 0.8446032922749576},
                  {0.5978029457196989, 0.402197054280301, 0.0}};
}

std::vector<std::string_view> preset_names() {
    return {"bipartite2", "fig3", "fig1-like", "tft3", "fig7", "symmetric3"};
}

std::optional<Instance> preset(std::string_view name) {
    if (name == "bipartite2") {
        return Instance{Economy(Matrix{{0.0, 1.0}, {1.0, 0.0}}),
                        Matrix{{0.0, 1.0 / 3.0}, {2.0 / 3.0, 0.0}}, std::nullopt, std::nullopt};
    }
    if (name == "fig3") {
        return Instance{Economy(Matrix{{38.0, 51.0}, {79.0, 75.0}}),
                        Matrix{{0.5, 0.5}, {0.5, 0.5}}, std::nullopt, std::nullopt};
    }
    if (name == "fig1-like") {
        GeneratorSpec spec;
        spec.n = 10;
        spec.topology.kind = Topology::Kind::kCyclic;
        spec.topology.k = 3;
        spec.blocks = {3, 4, 3};
        spec.seed = 1;
        return generate_instance(spec);
    }
    if (name == "tft3") {
        // Bids at equal prices 1/3 reproduce the printed fractions: b_ij = y_ji / 3.
        const Matrix y = tft3_initial_fractions().fractions;
        Matrix b(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) b(i, j) = y(j, i) / 3.0;
        return Instance{Economy(Matrix{{0.0, 6.0, 4.0}, {3.0, 0.0, 9.0}, {9.0, 6.0, 0.0}}), b,
                        std::nullopt, std::nullopt};
    }
    if (name == "fig7") {
        return Instance{Economy(Matrix{{1.0, 2.0}, {1.0, 2.0}}), Matrix{{0.4, 0.6}, {0.9, 0.1}},
                        std::nullopt, std::nullopt};
    }
    if (name == "symmetric3") {
        return Instance{Economy(Matrix(3, 3, 1.0)), std::nullopt, std::nullopt, std::nullopt};
    }
    return std::nullopt;
}

}  // namespace tradepost::cli

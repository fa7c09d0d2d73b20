#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "subthurston/combinatorics.hpp"
#include "subthurston/potential.hpp"

namespace subthurston {

// Parsed experiment description. Geometric subsystems carry a PillowMap
// selection; the abstract variant carries only a tile matrix (for the
// matrix-level commands) and no geometry.
struct ExperimentConfig {
    int s = 3;
    std::string preset = "full";  // full | carpet | custom | gasket-abstract | abstract
    std::vector<Tile1> selected;  // for custom
    std::optional<TileMatrix> abstract_matrix;
    Potential phi = Potential::constant(0);
    std::optional<std::uint64_t> seed;
    nlohmann::json params;  // command-specific knobs, validated by the command

    bool geometric() const { return !abstract_matrix.has_value(); }
};

ExperimentConfig parse_config(const nlohmann::json& j);
Potential parse_potential(const nlohmann::json& j);
// "2/3", 0.5, or integers; exact when given as a fraction string.
Rat parse_rational(const nlohmann::json& j);
SplitPoint parse_point(const nlohmann::json& j);

Subsystem build_subsystem(const ExperimentConfig& cfg);

}  // namespace subthurston

#include "subthurston/config.hpp"

#include <cmath>

namespace subthurston {

namespace {

Colour parse_colour(const nlohmann::json& j) {
    std::string s = j.get<std::string>();
    if (s == "white" || s == "w") return Colour::White;
    if (s == "black" || s == "b") return Colour::Black;
    throw ConfigError("unknown colour: " + s);
}

}  // namespace

Rat parse_rational(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
    if (j.is_number_float()) {
        // Accept decimals with a modest denominator to stay exact.
        double v = j.get<double>();
        const std::int64_t den = 1'000'000;
        double scaled = v * den;
        if (std::abs(scaled - std::llround(scaled)) > 1e-9)
            throw ConfigError("coordinate not representable; pass it as a fraction string");
        return Rat(std::llround(scaled), den);
    }
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rat(BigInt(s));
            return Rat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
        } catch (const std::exception&) {
            throw ConfigError("bad rational literal: " + s);
        }
    }
    throw ConfigError("expected a rational (integer, decimal, or \"p/q\")");
}

SplitPoint parse_point(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("x") || !j.contains("y"))
        throw ConfigError("point must be {face, x, y}");
    Colour face = j.contains("face") ? parse_colour(j.at("face")) : Colour::White;
    SplitPoint p(face, parse_rational(j.at("x")), parse_rational(j.at("y")));
    if (p.x < 0 || p.x > 1 || p.y < 0 || p.y > 1)
        throw ConfigError("point coordinates must lie in [0,1]");
    return p;
}

Potential parse_potential(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("potential must have a kind");
    std::string kind = j.at("kind").get<std::string>();
    double constant = j.value("constant", 0.0);
    Potential p = Potential::constant(0);
    if (kind == "constant") {
        p = Potential::constant(j.value("value", constant));
    } else if (kind == "torus_trig") {
        std::vector<TrigTerm> terms;
        for (const auto& t : j.value("terms", nlohmann::json::array()))
            terms.push_back({t.value("k", 0), t.value("l", 0), t.value("coeff", 0.0)});
        p = Potential::torus_trig(std::move(terms), constant);
    } else if (kind == "coordinate_poly") {
        std::vector<PolyTerm> terms;
        for (const auto& t : j.value("terms", nlohmann::json::array()))
            terms.push_back({t.value("i", 0), t.value("j", 0), t.value("coeff", 0.0)});
        p = Potential::coordinate_poly(std::move(terms), constant);
    } else {
        throw ConfigError("unknown potential kind: " + kind);
    }
    if (j.contains("face_bias")) p.with_face_bias(j.at("face_bias").get<double>());
    return p;
}

ExperimentConfig parse_config(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (j.contains("map")) cfg.s = j.at("map").value("s", 3);
    if (cfg.s < 2 || cfg.s > 16) throw ConfigError("map.s must be in [2, 16]");

    const nlohmann::json sub = j.value("subsystem", nlohmann::json{{"preset", "full"}});
    cfg.preset = sub.value("preset", sub.contains("abstract_matrix") ? "abstract" : "full");
    if (cfg.preset == "custom") {
        if (!sub.contains("selected") || !sub.at("selected").is_array() ||
            sub.at("selected").empty())
            throw ConfigError("custom subsystem needs a non-empty selected list");
        for (const auto& t : sub.at("selected")) {
            Tile1 tile;
            tile.position = parse_colour(t.at("face"));
            int i = t.at("i").get<int>(), jj = t.at("j").get<int>();
            if (i < 0 || jj < 0 || i >= cfg.s || jj >= cfg.s)
                throw ConfigError("selected tile cell out of range");
            tile.cell = {static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(jj)};
            cfg.selected.push_back(tile);
        }
    } else if (cfg.preset == "gasket-abstract") {
        // Triangle-pillow gasket: abstract counts only, no grid geometry.
        TileMatrix A;
        A.m[0][0] = 3;
        A.m[1][1] = 3;
        cfg.abstract_matrix = A;
    } else if (cfg.preset == "abstract") {
        const auto& am = sub.at("abstract_matrix");
        if (!am.is_array() || am.size() != 2) throw ConfigError("abstract_matrix must be 2x2");
        TileMatrix A;
        for (int p = 0; p < 2; ++p)
            for (int c = 0; c < 2; ++c) {
                std::int64_t v = am.at(p).at(c).get<std::int64_t>();
                if (v < 0) throw ConfigError("abstract_matrix entries must be >= 0");
                A.m[p][c] = v;
            }
        cfg.abstract_matrix = A;
    } else if (cfg.preset == "carpet") {
        if (cfg.s != 3 && j.contains("map"))
            throw ConfigError("the carpet preset is defined on the s = 3 map");
        cfg.s = 3;
    } else if (cfg.preset != "full") {
        throw ConfigError("unknown subsystem preset: " + cfg.preset);
    }

    if (j.contains("potential")) cfg.phi = parse_potential(j.at("potential"));
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.params = j.value("params", nlohmann::json::object());
    return cfg;
}

Subsystem build_subsystem(const ExperimentConfig& cfg) {
    if (!cfg.geometric())
        throw ConfigError("this command needs a geometric subsystem, not an abstract matrix");
    if (cfg.preset == "full") return Subsystem::full(cfg.s);
    if (cfg.preset == "carpet") return Subsystem::carpet();
    return Subsystem(PillowMap(cfg.s), cfg.selected);
}

}  // namespace subthurston

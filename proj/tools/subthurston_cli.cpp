// Command-line front end: runs one experiment per invocation from a JSON
// config and writes a machine-readable JSON result (plus optional CSV
// convergence tables).
//
// Exit codes: 0 success, 2 budget exceeded, 3 invalid config,
// 4 assumption violation.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "subthurston/config.hpp"
#include "subthurston/equilibrium.hpp"
#include "subthurston/statistics.hpp"
#include "subthurston/transfer.hpp"

using json = nlohmann::ordered_json;
using namespace subthurston;

namespace {

json matrix_json(const TileMatrix& A) {
    return json::array({json::array({A.m[0][0].str(), A.m[0][1].str()}),
                        json::array({A.m[1][0].str(), A.m[1][1].str()})});
}

json tristate_json(Tristate t) { return tristate_name(t); }

struct CsvTable {
    std::vector<std::array<std::string, 5>> rows;  // n, value, error_bar, target, gap

    void add(double n, double value, double error_bar, double target, double gap) {
        auto f = [](double x) {
            char buf[32];
            snprintf(buf, sizeof buf, "%.17g", x);
            return std::string(buf);
        };
        rows.push_back({f(n), f(value), f(error_bar), f(target), f(gap)});
    }
    void write(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw ConfigError("cannot open csv output: " + path);
        os << "n,value,error_bar,target,gap\n";
        for (const auto& r : rows)
            os << r[0] << ',' << r[1] << ',' << r[2] << ',' << r[3] << ',' << r[4] << '\n';
    }
};

SplitPoint basepoint_from(const json& params, const char* key) {
    if (params.contains(key)) return parse_point(params.at(key));
    return SplitPoint(Colour::White, Rat(1, 7), Rat(2, 7));
}

double param_or(const json& p, const char* key, double dflt) { return p.value(key, dflt); }
int iparam_or(const json& p, const char* key, int dflt) { return p.value(key, dflt); }

SpectralOptions spectral_options(const json& p) {
    SpectralOptions opt;
    opt.tol = param_or(p, "tol", 1e-10);
    opt.max_iter = iparam_or(p, "max_iter", 100000);
    if (opt.tol <= 0 || opt.max_iter < 1) throw ConfigError("bad solver options");
    return opt;
}

json spectral_json(const SpectralData& sd) {
    json j;
    j["depth"] = sd.index->depth();
    j["lambda"] = sd.lambda();
    j["pressure"] = sd.pressure();
    j["residual_right"] = sd.resid_right;
    j["residual_left"] = sd.resid_left;
    j["lambda_gap"] = sd.lambda_gap;
    j["iterations_right"] = sd.iterations_right;
    j["iterations_left"] = sd.iterations_left;
    j["pre_normalization_mass"] = sd.pre_normalization_mass;
    j["primitivity_warning"] = sd.primitivity_warning;
    auto mm = sd.m.face_mass();
    j["eigenmeasure_face_mass"] = {{"white", mm[0]}, {"black", mm[1]}};
    double umin = sd.u.values[0], umax = sd.u.values[0];
    for (double v : sd.u.values) {
        umin = std::min(umin, v);
        umax = std::max(umax, v);
    }
    j["eigenfunction_min"] = umin;
    j["eigenfunction_max"] = umax;
    return j;
}

json run_command(const std::string& command, const ExperimentConfig& cfg,
                 std::optional<CsvTable>& csv) {
    json out;
    out["command"] = command;
    const json& params = cfg.params;

    if (command == "describe") {
        out["map"] = {{"s", cfg.s}};
        if (cfg.geometric()) {
            Subsystem sub = build_subsystem(cfg);
            out["map"]["degree"] = sub.map().degree();
            out["subsystem"] = {{"preset", cfg.preset},
                                {"tile_count", sub.tile_count()},
                                {"surjective", sub.surjective()},
                                {"tile_matrix", matrix_json(tile_matrix(sub))},
                                {"summary", sub.describe()}};
        } else {
            out["subsystem"] = {{"preset", cfg.preset},
                                {"abstract", true},
                                {"tile_matrix", matrix_json(*cfg.abstract_matrix)}};
        }
        out["potential"] = cfg.phi.describe();
        if (!cfg.phi.has_face_bias()) {
            HolderData h = cfg.phi.holder_data();
            out["holder"] = {{"alpha", h.alpha}, {"H", h.H}, {"M", h.M}};
        }
        return out;
    }

    if (command == "tile-matrix") {
        int level = iparam_or(params, "level", 1);
        if (level < 0 || level > 64) throw ConfigError("tile-matrix: level out of range");
        TileMatrix A = cfg.geometric() ? tile_matrix(build_subsystem(cfg)) : *cfg.abstract_matrix;
        out["tile_matrix"] = matrix_json(A);
        out["classification"] = matrix_class_name(classify_matrix(A));
        TileMatrix An = A.pow(level);
        out["level"] = level;
        out["tile_matrix_level"] = matrix_json(An);
        out["total_tiles"] = An.total().str();
        if (cfg.geometric()) {
            Subsystem sub = build_subsystem(cfg);
            int nwalk = std::min(level, 5);
            if (nwalk >= 1) {
                out["cross_check_level"] = nwalk;
                out["cross_check_ok"] = count_tiles_by_walk(sub, nwalk) == A.pow(nwalk);
            }
        }
        return out;
    }

    if (command == "check") {
        int max_level = iparam_or(params, "max_level", 6);
        int diag_level = iparam_or(params, "diagnostics_level", 3);
        StructureReport rep;
        LimitSetReport lim;
        if (cfg.geometric()) {
            Subsystem sub = build_subsystem(cfg);
            rep = check_structure(sub, max_level);
            lim = limit_set_diagnostics(sub, diag_level);
            out["transitivity"] = {{"transitive", transitivity_report(sub).transitive},
                                   {"mixing", transitivity_report(sub).mixing}};
        } else {
            rep = check_structure_matrix(*cfg.abstract_matrix);
            lim = limit_set_diagnostics_matrix(*cfg.abstract_matrix, diag_level);
            out["transitivity"] = {{"transitive", rep.irreducible}, {"mixing", rep.primitive}};
        }
        out["structure"] = {{"irreducible", rep.irreducible},
                            {"primitive", rep.primitive},
                            {"strongly_irreducible", tristate_json(rep.strongly_irreducible)},
                            {"strongly_primitive", tristate_json(rep.strongly_primitive)},
                            {"max_level", rep.max_level}};
        if (rep.witness) out["structure"]["witness"] = *rep.witness;
        out["limit_set"] = {{"level", lim.level},
                            {"every_tile_meets_limitset", lim.every_tile_meets_limitset},
                            {"per_face_path_count",
                             {{"white", lim.per_face_path_count[0].str()},
                              {"black", lim.per_face_path_count[1].str()}}},
                            {"isolated_point_risk", lim.isolated_point_risk}};
        return out;
    }

    // Everything below needs geometry.
    Subsystem sub = build_subsystem(cfg);
    const Potential& phi = cfg.phi;

    if (command == "pressure") {
        int n_max = iparam_or(params, "n_max", 8);
        int depth = iparam_or(params, "depth", 4);
        SplitPoint q = basepoint_from(params, "basepoint");
        auto tiles = pressure_via_tiles(sub, phi, n_max);
        auto oper = pressure_via_operator(sub, phi, q, n_max);
        SpectralData sd = solve_spectral(sub, phi, depth, spectral_options(params));
        out["spectral"] = spectral_json(sd);
        json trows = json::array(), orows = json::array();
        for (const auto& r : tiles)
            trows.push_back({{"n", r.n},
                             {"value", r.value},
                             {"white", r.white},
                             {"black", r.black},
                             {"total", r.total},
                             {"error_bar", r.error_bar}});
        for (const auto& r : oper)
            orows.push_back({{"n", r.n}, {"value", r.value}, {"error_bar", r.error_bar}});
        out["via_tiles"] = trows;
        out["via_operator"] = orows;
        out["estimates"] = {{"tiles", tiles.back().value},
                            {"operator", oper.back().value},
                            {"spectral", sd.pressure()}};
        out["gap_tiles_vs_spectral"] = std::abs(tiles.back().value - sd.pressure());
        out["gap_operator_vs_spectral"] = std::abs(oper.back().value - sd.pressure());
        if (csv)
            for (const auto& r : tiles)
                csv->add(r.n, r.value, r.error_bar, sd.pressure(),
                         std::abs(r.value - sd.pressure()));
        return out;
    }

    if (command == "spectral") {
        int depth = iparam_or(params, "depth", 4);
        SpectralData sd = solve_spectral(sub, phi, depth, spectral_options(params));
        out["spectral"] = spectral_json(sd);
        if (csv) {
            const TileIndex& ix = *sd.index;
            for (std::size_t i = 0; i < std::min<std::size_t>(ix.size(), 100000); ++i)
                csv->add(static_cast<double>(i), sd.u.values[i], 0.0, 0.0, sd.m.weights[i]);
        }
        return out;
    }

    if (command == "gibbs") {
        int depth = iparam_or(params, "depth", 5);
        int n_levels = iparam_or(params, "n_levels", std::min(depth, 4));
        SpectralData sd = solve_spectral(sub, phi, depth, spectral_options(params));
        EquilibriumState st = equilibrium_state(sd);
        GibbsReport rep = gibbs_check(sub, phi, st, sd.pressure(), n_levels);
        out["pressure"] = sd.pressure();
        out["constant"] = rep.constant;
        out["within_bound"] = rep.within_bound;
        out["max_over_min"] = rep.max_over_min;
        out["mid_log_slope"] = rep.mid_log_slope;
        json rows = json::array();
        for (const auto& lv : rep.levels) {
            rows.push_back({{"n", lv.n}, {"min_ratio", lv.min_ratio}, {"max_ratio", lv.max_ratio}});
            if (csv)
                csv->add(lv.n, lv.max_ratio / lv.min_ratio, 0.0, 1.0,
                         0.5 * (std::log(lv.max_ratio) + std::log(lv.min_ratio)));
        }
        out["levels"] = rows;
        out["pre_normalization_mass"] = st.pre_normalization_mass;
        return out;
    }

    if (command == "invariance") {
        int depth = iparam_or(params, "depth", 5);
        SpectralData sd = solve_spectral(sub, phi, depth, spectral_options(params));
        EquilibriumState st = equilibrium_state(sd);
        InvarianceReport rep = invariance_check(sub, st);
        out["depth"] = rep.depth;
        out["max_defect"] = rep.max_defect;
        out["tolerance"] = 10 * spectral_options(params).tol;
        if (params.value("control", false)) {
            if (!cfg.seed) throw ConfigError("invariance control requires a seed");
            Rng rng(*cfg.seed);
            std::vector<double> w(st.index->size());
            double tot = 0;
            for (double& x : w) tot += (x = 0.05 + rng.unit());
            for (double& x : w) x /= tot;
            TileMeasure noise{st.index, std::move(w), true};
            out["control_defect"] = invariance_defect(sub, noise).max_defect;
        }
        return out;
    }

    if (command == "derivative") {
        if (!params.contains("gamma")) throw ConfigError("derivative: params.gamma required");
        Potential gamma = parse_potential(params.at("gamma"));
        double eps = param_or(params, "eps", 1e-3);
        int depth = iparam_or(params, "depth", 5);
        bool rich = params.value("richardson", false);
        DerivativeReport rep =
            pressure_derivative_check(sub, phi, gamma, eps, depth, rich, spectral_options(params));
        out["finite_diff"] = rep.finite_diff;
        out["integral"] = rep.integral;
        out["gap"] = rep.gap;
        out["eps"] = rep.eps;
        out["depth"] = rep.depth;
        out["richardson"] = rep.richardson;
        if (csv) csv->add(depth, rep.finite_diff, eps * eps, rep.integral, rep.gap);
        return out;
    }

    if (command == "equidistribute") {
        if (!params.contains("g")) throw ConfigError("equidistribute: params.g required");
        Potential g = parse_potential(params.at("g"));
        std::string mode_s = params.value("mode", std::string("birkhoff"));
        PreimageMode mode = mode_s == "point" ? PreimageMode::Point : PreimageMode::Birkhoff;
        int n_min = iparam_or(params, "n_min", 4);
        int n_max = iparam_or(params, "n_max", 8);
        int depth = iparam_or(params, "depth", 5);
        SplitPoint q = basepoint_from(params, "basepoint");
        SpectralData sd = solve_spectral(sub, phi, depth, spectral_options(params));
        double reference = 0;
        if (mode == PreimageMode::Birkhoff) {
            EquilibriumState st = equilibrium_state(sd);
            for (std::size_t i = 0; i < st.index->size(); ++i)
                reference += st.mu.weights[i] * g.eval(st.index->center(i));
        } else {
            for (std::size_t i = 0; i < sd.index->size(); ++i)
                reference += sd.m.weights[i] * g.eval(sd.index->center(i));
        }
        WeakStarTable table = weak_star_table(sub, phi, g, mode, q, n_min, n_max, reference);
        out["mode"] = mode_s;
        out["reference"] = reference;
        out["trend_slope"] = table.trend_slope;
        json rows = json::array();
        for (const auto& r : table.rows) {
            rows.push_back({{"n", r.n}, {"integral", r.integral}, {"gap", r.gap}});
            if (csv) csv->add(r.n, r.integral, 0.0, reference, r.gap);
        }
        out["rows"] = rows;
        out["final_gap"] = table.rows.back().gap;
        return out;
    }

    if (command == "mgf") {
        if (!params.contains("psi")) throw ConfigError("mgf: params.psi required");
        Potential psi = parse_potential(params.at("psi"));
        int n_max = iparam_or(params, "n_max", 8);
        int depth = iparam_or(params, "depth", 5);
        MgfReport rep = mgf_pressure_check(sub, phi, psi, n_max, depth, spectral_options(params));
        out["target"] = rep.target;
        out["pressure_phi"] = rep.pressure_phi;
        out["pressure_phi_psi"] = rep.pressure_phi_psi;
        out["mass_drift"] = rep.mass_drift;
        json rows = json::array();
        for (const auto& r : rep.rows) {
            rows.push_back({{"n", r.n}, {"lhs", r.lhs}, {"gap", r.gap}});
            if (csv) csv->add(r.n, r.lhs, rep.mass_drift, rep.target, r.gap);
        }
        out["rows"] = rows;
        out["final_gap"] = rep.rows.back().gap;
        return out;
    }

    if (command == "rate") {
        int depth = iparam_or(params, "depth", 5);
        SpectralData sd = solve_spectral(sub, phi, depth, spectral_options(params));
        json rows = json::array();
        auto report = [&](const std::string& name, const MarkovMeasure& mm) {
            RateReport r = rate_function(sub, phi, sd.pressure(), mm, depth);
            rows.push_back({{"chain", name},
                            {"I", r.I},
                            {"entropy", r.entropy},
                            {"phi_integral", r.phi_integral},
                            {"quadrature_error", r.quadrature_error}});
        };
        json chains = params.value("chains", json::array({"uniform", "deterministic"}));
        for (const auto& c : chains) {
            std::string name = c.get<std::string>();
            if (name == "uniform")
                report("uniform", uniform_chain(sub));
            else if (name == "deterministic")
                report("deterministic", deterministic_chain(sub));
            else
                throw ConfigError("rate: unknown chain " + name);
        }
        int random_n = iparam_or(params, "random_chains", 0);
        if (random_n > 0) {
            if (!cfg.seed) throw ConfigError("rate: random chains require a seed");
            for (int k = 0; k < random_n; ++k)
                report("random/" + std::to_string(k), random_chain(sub, *cfg.seed + static_cast<std::uint64_t>(k)));
        }
        out["pressure"] = sd.pressure();
        out["chains"] = rows;
        return out;
    }

    if (command == "ldp") {
        if (!params.contains("g")) throw ConfigError("ldp: params.g required");
        Potential g = parse_potential(params.at("g"));
        int depth = iparam_or(params, "depth", 5);
        SpectralData sd = solve_spectral(sub, phi, depth, spectral_options(params));
        EquilibriumState st = equilibrium_state(sd);
        double centre_default = 0;
        for (std::size_t i = 0; i < st.index->size(); ++i)
            centre_default += st.mu.weights[i] * g.eval(st.index->center(i));
        double a = param_or(params, "a", centre_default);
        double r = param_or(params, "r", 0.1);
        std::vector<int> n_list;
        for (const auto& v : params.value("n_list", json::array({4, 6, 8})))
            n_list.push_back(v.get<int>());
        SplitPoint q = basepoint_from(params, "basepoint");
        auto rows = ldp_empirical(sub, phi, g, a, r, n_list, q);
        out["a"] = a;
        out["r"] = r;
        out["g_equilibrium_mean"] = centre_default;
        json jrows = json::array();
        for (const auto& row : rows) {
            jrows.push_back({{"n", row.n}, {"mass", row.mass}, {"log_rate", row.log_rate}});
            if (csv) csv->add(row.n, row.mass, 0.0, 0.0, row.log_rate);
        }
        out["rows"] = jrows;
        int scan = iparam_or(params, "chain_scan", 0);
        if (scan > 0) {
            if (!cfg.seed) throw ConfigError("ldp: chain_scan requires a seed");
            double best = std::numeric_limits<double>::infinity();
            int hits = 0;
            for (int k = 0; k < scan; ++k) {
                MarkovMeasure mm = random_chain(sub, *cfg.seed + 1000 + static_cast<std::uint64_t>(k));
                MarkovIntegral gi = markov_integral(sub, mm, g, std::min(depth, 5));
                if (std::abs(gi.value - a) < r) {
                    ++hits;
                    best = std::min(best,
                                    rate_function(sub, phi, sd.pressure(), mm, depth).I);
                }
            }
            out["chain_scan"] = {{"count", scan},
                                 {"hits", hits},
                                 {"min_rate_in_window",
                                  hits > 0 ? json(best) : json(nullptr)}};
        }
        return out;
    }

    throw ConfigError("unknown command: " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subsystem thermodynamics on the pillow sphere"};
    app.require_subcommand(0);
    std::string command, config_path, out_path, csv_path;
    app.add_option("command", command,
                   "describe | tile-matrix | check | pressure | spectral | gibbs | invariance | "
                   "derivative | equidistribute | mgf | rate | ldp")
        ->required();
    app.add_option("--config", config_path, "JSON experiment config")->required();
    app.add_option("--out", out_path, "result JSON path (default: stdout)");
    app.add_option("--csv", csv_path, "optional CSV table (n,value,error_bar,target,gap)");
    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot read config: " + config_path);
        nlohmann::json raw;
        try {
            raw = nlohmann::json::parse(in);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        ExperimentConfig cfg = parse_config(raw);
        std::optional<CsvTable> csv;
        if (!csv_path.empty()) csv.emplace();

        json result = run_command(command, cfg, csv);
        result["config_echo"] = raw;

        if (csv) csv->write(csv_path);
        if (out_path.empty()) {
            std::cout << result.dump(2) << std::endl;
        } else {
            std::ofstream os(out_path);
            if (!os) throw ConfigError("cannot open output: " + out_path);
            os << result.dump(2) << '\n';
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "{\"error\":\"config\",\"reason\":" << nlohmann::json(e.what()).dump() << "}\n";
        return 3;
    } catch (const BudgetExceeded& e) {
        std::cerr << "{\"error\":\"budget\",\"reason\":" << nlohmann::json(e.what()).dump() << "}\n";
        return 2;
    } catch (const AssumptionViolation& e) {
        std::cerr << "{\"error\":\"assumption\",\"reason\":" << nlohmann::json(e.what()).dump()
                  << "}\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"internal\",\"reason\":" << nlohmann::json(e.what()).dump()
                  << "}\n";
        return 1;
    }
}

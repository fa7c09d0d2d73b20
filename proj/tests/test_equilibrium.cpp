#include <doctest.h>

#include <cmath>

#include "subthurston/equilibrium.hpp"

using namespace subthurston;

TEST_CASE("equilibrium state of the carpet at zero potential is uniform") {
    Subsystem carpet = Subsystem::carpet();
    SpectralData sd = solve_spectral(carpet, Potential::constant(0), 4);
    EquilibriumState st = equilibrium_state(sd);
    const double expect = 1.0 / static_cast<double>(st.index->size());
    for (double w : st.mu.weights) CHECK(w == doctest::Approx(expect).epsilon(1e-10));
    CHECK(st.mu.total() == doctest::Approx(1.0));
    CHECK(st.pre_normalization_mass == doctest::Approx(1.0));
}

TEST_CASE("constant shifts do not move the equilibrium state") {
    Subsystem carpet = Subsystem::carpet();
    Potential phi = Potential::torus_trig({{1, 1, 0.3}});
    EquilibriumState a = equilibrium_state(solve_spectral(carpet, phi, 3));
    EquilibriumState b =
        equilibrium_state(solve_spectral(carpet, phi + Potential::constant(2.0), 3));
    CHECK(a.mu.weights == b.mu.weights);
}

TEST_CASE("measure refinement") {
    Subsystem carpet = Subsystem::carpet();
    SUBCASE("zero potential splits mass equally among the eight children") {
        SpectralData sd = solve_spectral(carpet, Potential::constant(0), 2);
        RefineResult ref = refine_measure(carpet, Potential::constant(0), sd, sd.m, 3);
        CHECK(ref.m.index->depth() == 3);
        CHECK(ref.m.total() == doctest::Approx(1.0));
        CHECK(ref.mass_drift < 1e-12);
        const double expect = 1.0 / static_cast<double>(ref.m.index->size());
        for (double w : ref.m.weights) CHECK(w == doctest::Approx(expect));
    }
    SUBCASE("coarse-graining undoes refinement for a trig potential") {
        Potential phi = Potential::torus_trig({{1, 1, 0.3}});
        SpectralData sd = solve_spectral(carpet, phi, 3);
        RefineResult ref = refine_measure(carpet, phi, sd, sd.m, 5);
        TileMeasure back = coarse_grain(ref.m, sd.index);
        double worst = 0;
        for (std::size_t i = 0; i < back.weights.size(); ++i)
            worst = std::max(worst, std::abs(back.weights[i] - sd.m.weights[i]));
        CHECK(worst < 1e-10);
        CHECK(back.total() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("gibbs ratios") {
    Subsystem carpet = Subsystem::carpet();
    SUBCASE("zero potential: ratios are flat across levels") {
        SpectralData sd = solve_spectral(carpet, Potential::constant(0), 5);
        EquilibriumState st = equilibrium_state(sd);
        GibbsReport rep = gibbs_check(carpet, Potential::constant(0), st, sd.pressure(), 4);
        for (const auto& lv : rep.levels) {
            CHECK(lv.max_ratio / lv.min_ratio == doctest::Approx(1.0).epsilon(1e-9));
        }
        CHECK(rep.within_bound);
        CHECK(std::abs(rep.mid_log_slope) < 1e-9);
    }
    SUBCASE("trig potential stays within the conservative constant") {
        Potential phi = Potential::torus_trig({{1, 1, 0.3}});
        SpectralData sd = solve_spectral(carpet, phi, 5);
        EquilibriumState st = equilibrium_state(sd);
        GibbsReport rep = gibbs_check(carpet, phi, st, sd.pressure(), 5);
        CHECK(rep.within_bound);
        CHECK(rep.max_over_min > 1.0);
        CHECK(std::isfinite(rep.max_over_min));
        CHECK(std::abs(rep.mid_log_slope) < 1e-3);
    }
    SUBCASE("a wrong pressure shows up as exponential drift") {
        Potential phi = Potential::torus_trig({{1, 1, 0.3}});
        SpectralData sd = solve_spectral(carpet, phi, 5);
        EquilibriumState st = equilibrium_state(sd);
        const double delta = 0.05;
        GibbsReport rep = gibbs_check(carpet, phi, st, sd.pressure() + delta, 5);
        CHECK(rep.mid_log_slope == doctest::Approx(delta).epsilon(0.05));
    }
}

TEST_CASE("invariance defect") {
    Subsystem carpet = Subsystem::carpet();
    SUBCASE("zero potential is exactly invariant on the grid") {
        SpectralData sd = solve_spectral(carpet, Potential::constant(0), 4);
        CHECK(invariance_check(carpet, equilibrium_state(sd)).max_defect < 1e-12);
    }
    SUBCASE("trig potential within solver tolerance") {
        Potential phi = Potential::torus_trig({{1, 1, 0.3}});
        SpectralData sd = solve_spectral(carpet, phi, 5);
        EquilibriumState st = equilibrium_state(sd);
        CHECK(invariance_check(carpet, st).max_defect < 10 * 1e-10);
        // Aggregation can only help: coarser levels inherit the bound.
        for (int level : {2, 3, 4})
            CHECK(invariance_check(carpet, st, level).max_defect < 10 * 1e-10);
    }
    SUBCASE("random measures are far from invariant") {
        SpectralData sd = solve_spectral(carpet, Potential::constant(0), 4);
        Rng rng(5);
        std::vector<double> w(sd.index->size());
        double tot = 0;
        for (double& x : w) tot += (x = 0.05 + rng.unit());
        for (double& x : w) x /= tot;
        TileMeasure noise{sd.index, std::move(w), true};
        CHECK(invariance_defect(carpet, noise).max_defect > 0.01 / 4096);
    }
}

TEST_CASE("entropy estimates") {
    SUBCASE("carpet at zero potential") {
        Subsystem carpet = Subsystem::carpet();
        SpectralData sd = solve_spectral(carpet, Potential::constant(0), 4);
        EntropyEstimate est = entropy_estimate(equilibrium_state(sd), Potential::constant(0),
                                               sd.pressure());
        CHECK(est.entropy == doctest::Approx(std::log(8.0)).epsilon(1e-9));
    }
    SUBCASE("full map entropy is log degree") {
        Subsystem full = Subsystem::full(3);
        SpectralData sd = solve_spectral(full, Potential::constant(0), 4);
        EntropyEstimate est = entropy_estimate(equilibrium_state(sd), Potential::constant(0),
                                               sd.pressure());
        CHECK(std::abs(est.entropy - std::log(9.0)) < 1e-6);
    }
    SUBCASE("constant potentials cancel") {
        Subsystem carpet = Subsystem::carpet();
        Potential c = Potential::constant(0.9);
        SpectralData sd = solve_spectral(carpet, c, 4);
        EntropyEstimate est = entropy_estimate(equilibrium_state(sd), c, sd.pressure());
        CHECK(est.entropy == doctest::Approx(std::log(8.0)).epsilon(1e-9));
    }
}

TEST_CASE("pressure derivative identity") {
    Subsystem carpet = Subsystem::carpet();
    SUBCASE("constant direction is exact") {
        DerivativeReport rep = pressure_derivative_check(
            carpet, Potential::torus_trig({{1, 1, 0.2}}), Potential::constant(1.0), 1e-3, 3);
        CHECK(rep.finite_diff == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(rep.integral == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("trig direction at zero potential") {
        Potential gamma = Potential::torus_trig({{1, 1, 0.3}});
        DerivativeReport rep =
            pressure_derivative_check(carpet, Potential::constant(0), gamma, 1e-3, 5);
        CHECK(rep.gap < 5e-3);
    }
    SUBCASE("antisymmetry in the direction") {
        Potential gamma = Potential::torus_trig({{1, 1, 0.3}});
        DerivativeReport plus =
            pressure_derivative_check(carpet, Potential::constant(0), gamma, 1e-3, 3);
        DerivativeReport minus =
            pressure_derivative_check(carpet, Potential::constant(0), gamma * -1.0, 1e-3, 3);
        CHECK(plus.finite_diff == doctest::Approx(-minus.finite_diff).epsilon(1e-12));
    }
    SUBCASE("gap trend over depths 4..6") {
        // The gaps sit at solver-noise level here, so only the trend across
        // the window is meaningful, not strict per-step monotonicity.
        Potential phi = Potential::torus_trig({{1, 1, 0.3}});
        Potential gamma = Potential::torus_trig({{2, 1, 0.25}});
        std::vector<double> gaps;
        for (int depth : {4, 5, 6})
            gaps.push_back(pressure_derivative_check(carpet, phi, gamma, 1e-3, depth).gap);
        CHECK(gaps.back() <= gaps.front() + 1e-9);
        for (double g : gaps) CHECK(g < 5e-3);
    }
}

#include <doctest.h>

#include <cmath>

#include "subthurston/statistics.hpp"

using namespace subthurston;

namespace {

SplitPoint generic_point(Colour face) { return SplitPoint(face, Rat(2, 7), Rat(3, 7)); }

}  // namespace

TEST_CASE("preimage measures are probabilities with the expected weights") {
    Potential zero = Potential::constant(0);
    Subsystem full = Subsystem::full(3);
    SUBCASE("uniform weights over 9^n preimages when phi = 0") {
        DiscreteMeasure nu = preimage_measure(full, zero, generic_point(Colour::White), 3,
                                              PreimageMode::Point);
        CHECK(nu.atoms.size() == 9 * 9 * 9);
        for (const auto& a : nu.atoms) CHECK(a.w == doctest::Approx(1.0 / 729));
        CHECK(nu.total() == doctest::Approx(1.0));
    }
    SUBCASE("constants cancel in the normalization") {
        DiscreteMeasure nu0 = preimage_measure(full, zero, generic_point(Colour::White), 2,
                                               PreimageMode::Point);
        DiscreteMeasure nuc = preimage_measure(full, Potential::constant(0.7),
                                               generic_point(Colour::White), 2, PreimageMode::Point);
        REQUIRE(nu0.atoms.size() == nuc.atoms.size());
        for (std::size_t i = 0; i < nu0.atoms.size(); ++i)
            CHECK(nu0.atoms[i].w == doctest::Approx(nuc.atoms[i].w));
    }
    SUBCASE("birkhoff mode spreads mass over orbits, total stays one") {
        Potential phi = Potential::torus_trig({{1, 1, 0.3}});
        DiscreteMeasure nu = preimage_measure(Subsystem::carpet(), phi,
                                              generic_point(Colour::Black), 3,
                                              PreimageMode::Birkhoff);
        CHECK(nu.atoms.size() == 3 * 8 * 8 * 8);
        CHECK(nu.total() == doctest::Approx(1.0));
    }
}

TEST_CASE("pushforward of the point preimage measure reweights one level down") {
    // For h on the sphere: int h d(F_* nu_n) = (sum over (n-1)-preimages of
    // h(y) * e^{S_{n-1} phi(y)} * (L phi-weight at y)) / Z_n, built from
    // exact branch algebra; must match pushing atoms through F.
    Subsystem carpet = Subsystem::carpet();
    Potential phi = Potential::torus_trig({{1, 1, 0.3}});
    const SplitPoint x = generic_point(Colour::White);
    const int n = 4;
    DiscreteMeasure nu = preimage_measure(carpet, phi, x, n, PreimageMode::Point, true);
    const PillowMap& map = carpet.map();
    auto h = [](const SplitPoint& p) {
        return std::cos(static_cast<double>(p.x)) + 0.5 * std::sin(static_cast<double>(p.y)) +
               (p.face == Colour::White ? 0.25 : -0.25);
    };
    double pushed = 0;
    for (const auto& a : nu.atoms) pushed += a.w * h(apply_map(map, a.p.to_split()));

    DiscreteMeasure prev = preimage_measure(carpet, phi, x, n - 1, PreimageMode::Point, true);
    double direct = 0, z = 0;
    for (const auto& a : prev.atoms) {
        double lw = apply_split_operator(
            carpet, phi, [](const FixedPoint&) { return 1.0; }, a.p.to_split(), 1, false);
        direct += a.w * lw * h(a.p.to_split());
        z += a.w * lw;
    }
    CHECK(pushed == doctest::Approx(direct / z).epsilon(1e-12));
}

TEST_CASE("weak-star integrals converge to the reference measures") {
    Subsystem carpet = Subsystem::carpet();
    Potential phi = Potential::torus_trig({{1, 1, 0.3}});
    Potential g = Potential::torus_trig({{1, 2, 0.4}});
    SpectralData sd = solve_spectral(carpet, phi, 4);

    SUBCASE("g = 1 has zero gap at every level") {
        WeakStarTable t = weak_star_table(carpet, phi, Potential::constant(1),
                                          PreimageMode::Point, generic_point(Colour::White), 1, 6,
                                          1.0);
        for (const auto& r : t.rows) CHECK(r.gap < 1e-12);
    }
    SUBCASE("point mode approaches the eigenmeasure") {
        double ref = 0;
        for (std::size_t i = 0; i < sd.index->size(); ++i)
            ref += sd.m.weights[i] * g.eval(sd.index->center(i));
        WeakStarTable t = weak_star_table(carpet, phi, g, PreimageMode::Point,
                                          generic_point(Colour::White), 2, 8, ref);
        CHECK(t.rows.back().gap < 1e-2);
        CHECK(t.trend_slope <= 1e-4);
    }
    SUBCASE("birkhoff mode approaches the equilibrium state") {
        EquilibriumState st = equilibrium_state(sd);
        double ref = 0;
        for (std::size_t i = 0; i < st.index->size(); ++i)
            ref += st.mu.weights[i] * g.eval(st.index->center(i));
        WeakStarTable t = weak_star_table(carpet, phi, g, PreimageMode::Birkhoff,
                                          generic_point(Colour::White), 2, 8, ref);
        CHECK(t.rows.back().gap < 2e-2);
        CHECK(t.trend_slope <= 1e-3);
    }
}

TEST_CASE("markov chains on the tile shift") {
    Subsystem carpet = Subsystem::carpet();
    SUBCASE("uniform chain entropy is the log out-degree") {
        MarkovMeasure mm = uniform_chain(carpet);
        CHECK(markov_entropy(mm) == doctest::Approx(std::log(8.0)));
        CHECK(mm.stationarity_gap < 1e-12);
        for (double p : mm.pi) CHECK(p == doctest::Approx(1.0 / 16));
    }
    SUBCASE("deterministic chain has zero entropy") {
        CHECK(markov_entropy(deterministic_chain(carpet)) == doctest::Approx(0.0));
    }
    SUBCASE("symmetric choice between two successors has entropy log 2") {
        // Two tiles per face on the 2x2 map: every state sees exactly two
        // admissible successors, picked with probability 1/2 each.
        Subsystem sub(PillowMap(2), {{Colour::White, {0, 0}, Colour::White},
                                     {Colour::White, {0, 1}, Colour::White},
                                     {Colour::Black, {0, 0}, Colour::White},
                                     {Colour::Black, {0, 1}, Colour::White}});
        for (Colour c : {Colour::White, Colour::Black})
            REQUIRE(sub.continuations(c).size() == 2);
        CHECK(markov_entropy(uniform_chain(sub)) == doctest::Approx(std::log(2.0)));
    }
    SUBCASE("markov integral of constants is exact and linear") {
        MarkovMeasure mm = uniform_chain(carpet);
        CHECK(markov_integral(carpet, mm, Potential::constant(0.3), 4).value ==
              doctest::Approx(0.3));
        Potential g = Potential::torus_trig({{1, 1, 0.2}});
        double a = markov_integral(carpet, mm, g, 4).value;
        double b = markov_integral(carpet, mm, g * 2.0, 4).value;
        CHECK(b == doctest::Approx(2 * a).epsilon(1e-12));
    }
    SUBCASE("illegal transitions are rejected") {
        // Tile 0 is white-coloured, so a jump to a black-position tile is
        // off the admissible edge set.
        const std::size_t m = static_cast<std::size_t>(carpet.tile_count());
        std::vector<std::vector<double>> Q(m, std::vector<double>(m, 0.0));
        for (std::size_t i = 1; i < m; ++i) {
            const auto& succ = carpet.continuations(carpet.tile(static_cast<int>(i)).colour);
            for (int j : succ) Q[i][static_cast<std::size_t>(j)] = 1.0 / succ.size();
        }
        REQUIRE(carpet.tile(0).colour == Colour::White);
        for (std::size_t j = 0; j < m; ++j)
            if (carpet.tile(static_cast<int>(j)).position == Colour::Black) {
                Q[0][j] = 1.0;
                break;
            }
        CHECK_THROWS_AS(make_markov(carpet, Q), ConfigError);
    }
}

TEST_CASE("rate function on the carpet") {
    Subsystem carpet = Subsystem::carpet();
    Potential zero = Potential::constant(0);
    SpectralData sd = solve_spectral(carpet, zero, 4);
    SUBCASE("uniform chain is the equilibrium state") {
        RateReport r = rate_function(carpet, zero, sd.pressure(), uniform_chain(carpet), 4);
        CHECK(std::abs(r.I) < 1e-2);
    }
    SUBCASE("deterministic chain pays the full entropy") {
        RateReport r = rate_function(carpet, zero, sd.pressure(), deterministic_chain(carpet), 4);
        CHECK(r.I == doctest::Approx(std::log(8.0)).epsilon(1e-9));
    }
    SUBCASE("random chains have nonnegative rate") {
        for (int k = 0; k < 25; ++k) {
            RateReport r = rate_function(carpet, zero, sd.pressure(),
                                         random_chain(carpet, 100 + static_cast<std::uint64_t>(k)), 4);
            CHECK(r.I >= -1e-6);
        }
    }
    SUBCASE("trig potential: rate still nonnegative up to quadrature error") {
        Potential phi = Potential::torus_trig({{1, 1, 0.3}});
        SpectralData sdp = solve_spectral(carpet, phi, 5);
        for (int k = 0; k < 10; ++k) {
            RateReport r = rate_function(carpet, phi, sdp.pressure(),
                                         random_chain(carpet, 999 + static_cast<std::uint64_t>(k)), 5);
            CHECK(r.I >= -(r.quadrature_error + 1e-6));
        }
    }
}

TEST_CASE("mgf characterization of pressure differences") {
    Subsystem carpet = Subsystem::carpet();
    SUBCASE("constant psi is exact at every level") {
        MgfReport rep = mgf_pressure_check(carpet, Potential::torus_trig({{1, 1, 0.3}}),
                                           Potential::constant(0.4), 6, 4);
        CHECK(rep.target == doctest::Approx(0.4).epsilon(1e-10));
        for (const auto& r : rep.rows) CHECK(r.lhs == doctest::Approx(0.4).epsilon(1e-9));
    }
    SUBCASE("trig psi converges to the pressure difference") {
        MgfReport rep = mgf_pressure_check(carpet, Potential::constant(0),
                                           Potential::torus_trig({{1, 2, 0.2}}), 8, 5);
        CHECK(rep.rows.back().gap < 1e-2);
        CHECK(rep.mass_drift < 1e-8);
        // Trend: the deeper rows should not be worse than the first one.
        CHECK(rep.rows.back().gap <= rep.rows.front().gap + 1e-6);
    }
    SUBCASE("depth refinement: drift shrinks, the gap never degrades") {
        // At n = 8 the identity gap is dominated by the finite-n transient
        // (a few 1e-5 at every depth), so the depth influence shows up in
        // the refined-measure mass drift rather than the gap itself.
        Potential phi = Potential::torus_trig({{1, 1, 0.3}});
        Potential psi = Potential::torus_trig({{1, 2, 0.2}});
        std::vector<double> gaps, drifts;
        for (int depth : {4, 5, 6}) {
            MgfReport rep = mgf_pressure_check(carpet, phi, psi, 8, depth);
            gaps.push_back(rep.rows.back().gap);
            drifts.push_back(rep.mass_drift);
        }
        CHECK(drifts[1] < drifts[0]);
        CHECK(drifts[2] < drifts[1]);
        for (double g : gaps) CHECK(g < 1e-3);
        CHECK(gaps[2] <= gaps[0] * 1.05 + 1e-9);
    }
}

TEST_CASE("empirical large-deviation masses") {
    Subsystem carpet = Subsystem::carpet();
    Potential zero = Potential::constant(0);
    Potential g = Potential::torus_trig({{1, 1, 0.4}});
    SpectralData sd = solve_spectral(carpet, zero, 4);
    EquilibriumState st = equilibrium_state(sd);
    double mean = 0;
    for (std::size_t i = 0; i < st.index->size(); ++i)
        mean += st.mu.weights[i] * g.eval(st.index->center(i));

    SUBCASE("a wide window around the mean fills up") {
        auto rows = ldp_empirical(carpet, zero, g, mean, 0.6, {2, 4, 6, 8}, generic_point(Colour::White));
        CHECK(rows.back().mass > 0.98);
        CHECK(rows.back().log_rate > -0.01);
        for (std::size_t k = 1; k < rows.size(); ++k)
            CHECK(rows[k].log_rate >= rows[k - 1].log_rate - 1e-9);
    }
    SUBCASE("an unreachable window is empty") {
        auto rows = ldp_empirical(carpet, zero, g, 10.0, 0.5, {3, 5}, generic_point(Colour::White));
        for (const auto& r : rows) {
            CHECK(r.mass == 0.0);
            CHECK(std::isinf(r.log_rate));
        }
    }
    SUBCASE("masses are monotone in the radius") {
        auto narrow = ldp_empirical(carpet, zero, g, mean, 0.05, {6}, generic_point(Colour::White));
        auto wide = ldp_empirical(carpet, zero, g, mean, 0.2, {6}, generic_point(Colour::White));
        CHECK(narrow[0].mass <= wide[0].mass + 1e-12);
    }
}

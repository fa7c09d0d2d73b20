#include <doctest.h>

#include <cmath>

#include "subthurston/potential.hpp"

using namespace subthurston;

namespace {

SplitPoint rand_point(Rng& rng, Colour face) {
    const std::int64_t D = 9973;
    return SplitPoint(face, Rat(1 + static_cast<std::int64_t>(rng.below(D - 1)), D),
                      Rat(1 + static_cast<std::int64_t>(rng.below(D - 1)), D));
}

}  // namespace

TEST_CASE("evaluation of the built-in families") {
    Potential c = Potential::constant(0.7);
    CHECK(c.eval(SplitPoint(Colour::Black, Rat(1, 3), Rat(2, 5))) == doctest::Approx(0.7));

    Potential trig = Potential::torus_trig({{1, 1, 1.0}});
    CHECK(trig.eval(SplitPoint(Colour::White, 0, 0)) == doctest::Approx(1.0));
    CHECK(trig.eval(SplitPoint(Colour::White, Rat(1, 2), Rat(1, 2))) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // The chart formula is face independent, so values agree across the
    // glued curve and on equal coordinates of the two faces.
    Rng rng(3);
    for (int k = 0; k < 50; ++k) {
        SplitPoint w = rand_point(rng, Colour::White);
        SplitPoint b(Colour::Black, w.x, w.y);
        CHECK(trig.eval(w) == doctest::Approx(trig.eval(b)));
    }
}

TEST_CASE("holder data") {
    HolderData hc = Potential::constant(-2.5).holder_data();
    CHECK(hc.alpha == 1);
    CHECK(hc.H == 0);
    CHECK(hc.M == doctest::Approx(2.5));

    HolderData ht = Potential::torus_trig({{1, 1, 0.3}}).holder_data();
    CHECK(ht.H == doctest::Approx(0.6 * 3.14159265358979323846));
    CHECK(ht.M == doctest::Approx(0.3));

    // Seminorm bounds add across terms.
    HolderData h2 = Potential::torus_trig({{1, 1, 0.3}, {2, 0, 0.5}}).holder_data();
    CHECK(h2.H == doctest::Approx(0.6 * 3.14159265358979323846 + 1.0 * 3.14159265358979323846));

    CHECK_THROWS_AS(Potential::constant(0).with_face_bias(1.0).holder_data(), AssumptionViolation);
}

TEST_CASE("empirical holder bound") {
    Rng rng(17);
    for (const Potential& phi :
         {Potential::torus_trig({{1, 1, 0.3}}), Potential::torus_trig({{1, 2, 0.2}, {2, 1, 0.1}}),
          Potential::coordinate_poly({{2, 0, 0.4}, {1, 1, -0.3}})}) {
        HolderData h = phi.holder_data();
        for (int k = 0; k < 10000; ++k) {
            SplitPoint p = rand_point(rng, k % 2 ? Colour::White : Colour::Black);
            SplitPoint q = rand_point(rng, (k / 2) % 2 ? Colour::White : Colour::Black);
            double lhs = std::abs(phi.eval(p) - phi.eval(q));
            double rhs = h.H * std::pow(pillow_distance(p, q), h.alpha);
            CHECK(lhs <= rhs + 1e-12);
        }
    }
}

TEST_CASE("birkhoff sums") {
    PillowMap map(3);
    Potential c = Potential::constant(0.4);
    SplitPoint p(Colour::White, Rat(2, 7), Rat(3, 7));
    CHECK(birkhoff_sum(map, c, p, 0) == 0.0);
    CHECK(birkhoff_sum(map, c, p, 5) == doctest::Approx(2.0));

    // At a fixed corner the sum telescopes to n * phi(corner).
    Potential trig = Potential::torus_trig({{1, 1, 0.3}});
    SplitPoint corner(Colour::White, 0, 0);
    CHECK(birkhoff_sum(map, trig, corner, 5) == doctest::Approx(5 * trig.eval(corner)));

    SUBCASE("cocycle identity") {
        Rng rng(8);
        Potential phi = Potential::torus_trig({{1, 1, 0.25}});
        for (int rep = 0; rep < 40; ++rep) {
            SplitPoint q = rand_point(rng, rep % 2 ? Colour::White : Colour::Black);
            int n = 1 + static_cast<int>(rng.below(6)), m = 1 + static_cast<int>(rng.below(6));
            double lhs = birkhoff_sum(map, phi, q, n + m);
            double rhs = birkhoff_sum(map, phi, q, n) + birkhoff_sum(map, phi, apply_map_n(map, q, n), m);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("branch distortion bound on Birkhoff sums") {
    PillowMap map(3);
    Potential phi = Potential::torus_trig({{1, 1, 0.3}});
    HolderData h = phi.holder_data();
    const double C1 = h.H / (1.0 - std::pow(3.0, -h.alpha));
    Rng rng(55);
    for (int rep = 0; rep < 60; ++rep) {
        int n = 1 + static_cast<int>(rng.below(6));
        TileAddress a;
        a.face = rep % 2 ? Colour::White : Colour::Black;
        for (int k = 0; k < n; ++k)
            a.digits.push_back({static_cast<std::uint8_t>(rng.below(3)),
                                static_cast<std::uint8_t>(rng.below(3))});
        Colour col = address_colour(map, a);
        SplitPoint x = rand_point(rng, col), y = rand_point(rng, col);
        double sx = birkhoff_sum(map, phi, branch_evaluate(map, a, x), n);
        double sy = birkhoff_sum(map, phi, branch_evaluate(map, a, y), n);
        double bound = C1 * std::pow(pillow_distance(x, y), h.alpha);
        CHECK(std::abs(sx - sy) <= bound + 1e-12);
    }
}

TEST_CASE("potential algebra") {
    Potential phi = Potential::torus_trig({{1, 1, 0.3}});
    Potential sum = phi + Potential::constant(1.5);
    CHECK(sum.constant_part() == doctest::Approx(1.5));
    CHECK(sum.centered().constant_part() == 0.0);
    Potential scaled = phi * 2.0;
    SplitPoint p(Colour::White, Rat(1, 5), Rat(2, 5));
    CHECK(scaled.eval(p) == doctest::Approx(2 * phi.eval(p)));
}

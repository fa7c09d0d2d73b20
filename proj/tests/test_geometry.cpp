#include <doctest.h>

#include "subthurston/geometry.hpp"

using namespace subthurston;

namespace {

SplitPoint rand_point(Rng& rng, Colour face) {
    const std::int64_t D = 9973;
    return SplitPoint(face, Rat(1 + static_cast<std::int64_t>(rng.below(D - 1)), D),
                      Rat(1 + static_cast<std::int64_t>(rng.below(D - 1)), D));
}

TileAddress rand_address(Rng& rng, const PillowMap& map, int level) {
    TileAddress a;
    a.face = rng.below(2) ? Colour::Black : Colour::White;
    for (int k = 0; k < level; ++k)
        a.digits.push_back({static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(map.s))),
                            static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(map.s)))});
    return a;
}

}  // namespace

TEST_CASE("corners of the pillow are fixed points for odd s") {
    PillowMap map(3);
    for (Rat c : {Rat(0), Rat(1)}) {
        SplitPoint p(Colour::White, c, c);
        CHECK(apply_map(map, p) == p);
    }
    CHECK(apply_map(map, SplitPoint(Colour::White, 0, 1)) == SplitPoint(Colour::White, 0, 1));
}

TEST_CASE("torus lift images") {
    PillowMap m3(3);
    // 3 * (1/3, 1/3) = (1, 1) on the 2-periodic cover: the fixed corner of
    // the white face (the image cell has chequerboard class (1,1), white).
    SplitPoint img = apply_map(m3, SplitPoint(Colour::White, Rat(1, 3), Rat(1, 3)));
    CHECK(img == SplitPoint(Colour::White, 1, 1));
    CHECK(apply_map(m3, img) == img);

    PillowMap m2(2);
    CHECK(apply_map(m2, SplitPoint(Colour::White, Rat(1, 4), Rat(1, 4))) ==
          SplitPoint(Colour::White, Rat(1, 2), Rat(1, 2)));

    // Interior black-face point stays in a single chart step.
    CHECK(apply_map(m2, SplitPoint(Colour::Black, Rat(1, 4), Rat(1, 4))) ==
          SplitPoint(Colour::Black, Rat(1, 2), Rat(1, 2)));
}

TEST_CASE("invariant curve maps into itself") {
    for (int s : {2, 3, 4, 5}) {
        PillowMap map(s);
        Rng rng(7 + static_cast<std::uint64_t>(s));
        for (int k = 0; k < 50; ++k) {
            Rat t(1 + static_cast<std::int64_t>(rng.below(9972)), 9973);
            for (SplitPoint p : {SplitPoint(Colour::White, t, 0), SplitPoint(Colour::White, 0, t),
                                 SplitPoint(Colour::White, t, 1), SplitPoint(Colour::White, 1, t)}) {
                CHECK(on_boundary(apply_map(map, p)));
            }
        }
    }
}

TEST_CASE("resolve_address squares and colours") {
    PillowMap map(3);
    SUBCASE("level zero") {
        TileSquare sq = resolve_address(map, TileAddress{Colour::White, {}});
        CHECK(sq.corner_x == 0);
        CHECK(sq.side == 1);
        CHECK(sq.colour == Colour::White);
    }
    SUBCASE("centre cell is even parity") {
        TileSquare sq = resolve_address(map, TileAddress{Colour::White, {{1, 1}}});
        CHECK(sq.corner_x == Rat(1, 3));
        CHECK(sq.corner_y == Rat(1, 3));
        CHECK(sq.side == Rat(1, 3));
        CHECK(sq.colour == Colour::White);
    }
    SUBCASE("odd parity flips the colour") {
        CHECK(resolve_address(map, TileAddress{Colour::White, {{0, 1}}}).colour == Colour::Black);
        CHECK(resolve_address(map, TileAddress{Colour::Black, {{0, 1}}}).colour == Colour::White);
        CHECK(resolve_address(map, TileAddress{Colour::Black, {{1, 1}}}).colour == Colour::Black);
    }
}

TEST_CASE("branch evaluation inverts the map") {
    PillowMap map(3);
    SUBCASE("level zero is the identity") {
        SplitPoint q(Colour::Black, Rat(2, 7), Rat(3, 7));
        CHECK(branch_evaluate(map, TileAddress{Colour::Black, {}}, q) == q);
    }
    SUBCASE("corner cell example") {
        SplitPoint q(Colour::White, Rat(1, 2), Rat(1, 2));
        SplitPoint p = branch_evaluate(map, TileAddress{Colour::White, {{0, 0}}}, q);
        CHECK(p == SplitPoint(Colour::White, Rat(1, 6), Rat(1, 6)));
    }
    SUBCASE("round trip over random addresses") {
        for (int s : {2, 3}) {
            PillowMap m(s);
            Rng rng(11u * static_cast<unsigned>(s));
            for (int rep = 0; rep < 100; ++rep) {
                TileAddress a = rand_address(rng, m, 1 + static_cast<int>(rng.below(6)));
                Colour col = address_colour(m, a);
                SplitPoint q = rand_point(rng, col);
                SplitPoint p = branch_evaluate(m, a, q);
                TileSquare sq = resolve_address(m, a);
                CHECK(p.face == a.face);
                CHECK(p.x >= sq.corner_x);
                CHECK(p.x <= sq.corner_x + sq.side);
                CHECK(p.y >= sq.corner_y);
                CHECK(p.y <= sq.corner_y + sq.side);
                CHECK(apply_map_n(m, p, a.level()) == q);
            }
        }
    }
    SUBCASE("face mismatch is rejected") {
        SplitPoint q(Colour::Black, Rat(1, 2), Rat(1, 2));
        CHECK_THROWS_AS(branch_evaluate(map, TileAddress{Colour::White, {{0, 0}}}, q),
                        AssumptionViolation);
    }
}

TEST_CASE("fixed-denominator branch steps agree with the rational path") {
    for (int s : {2, 3, 5}) {
        PillowMap map(s);
        Rng rng(23u * static_cast<unsigned>(s));
        for (int rep = 0; rep < 200; ++rep) {
            Colour face = rng.below(2) ? Colour::Black : Colour::White;
            Cell cell{static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(s))),
                      static_cast<std::uint8_t>(rng.below(static_cast<std::uint64_t>(s)))};
            SplitPoint q = rand_point(rng, cell_colour(face, cell.i, cell.j));
            SplitPoint expect = branch_step(map, face, cell, q);
            FixedPoint got =
                make_branch_affine(map, face, cell).apply(FixedPoint::from_split(q), s);
            CHECK(got.to_split() == expect);
        }
    }
}

TEST_CASE("colour law: address colour equals the face of the iterated centre") {
    for (int s : {2, 3}) {
        PillowMap map(s);
        Rng rng(5u * static_cast<unsigned>(s));
        for (int rep = 0; rep < 120; ++rep) {
            TileAddress a = rand_address(rng, map, 1 + static_cast<int>(rng.below(4)));
            SplitPoint c = tile_center(map, a);
            SplitPoint img = apply_map_n(map, c, a.level());
            CHECK(img.face == address_colour(map, a));
            CHECK(img == SplitPoint(img.face, Rat(1, 2), Rat(1, 2)));
        }
    }
}

TEST_CASE("chequerboard balance at level one") {
    for (int s : {2, 3, 4, 5}) {
        PillowMap map(s);
        for (Colour face : {Colour::White, Colour::Black}) {
            int same = 0, other = 0;
            for (int i = 0; i < s; ++i)
                for (int j = 0; j < s; ++j)
                    (cell_colour(face, i, j) == face ? same : other) += 1;
            CHECK(same - other == (s % 2 == 1 ? 1 : 0));
        }
    }
}

TEST_CASE("touches_curve") {
    PillowMap map(3);
    CHECK(touches_curve(map, TileAddress{Colour::White, {}}));
    CHECK_FALSE(touches_curve(map, TileAddress{Colour::White, {{1, 1}}}));
    CHECK(touches_curve(map, TileAddress{Colour::White, {{0, 1}}}));
}

TEST_CASE("tile diameters scale by 1/s") {
    PillowMap map(3);
    CHECK(tile_diameter(map, 0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(tile_diameter(map, 2) == doctest::Approx(std::sqrt(2.0) / 9));
    for (int n = 0; n < 10; ++n)
        CHECK(tile_diameter(map, n + 1) == doctest::Approx(tile_diameter(map, n) / 3));
}

TEST_CASE("pillow metric: gluing and face separation") {
    Rng rng(99);
    // Boundary points coincide across faces.
    for (int k = 0; k < 20; ++k) {
        Rat t(1 + static_cast<std::int64_t>(rng.below(9972)), 9973);
        CHECK(pillow_distance(SplitPoint(Colour::White, t, 0), SplitPoint(Colour::Black, t, 0)) ==
              doctest::Approx(0.0));
        CHECK(pillow_distance(SplitPoint(Colour::White, 1, t), SplitPoint(Colour::Black, 1, t)) ==
              doctest::Approx(0.0));
    }
    // Same chart coordinates on opposite faces are genuinely far apart.
    SplitPoint w(Colour::White, Rat(1, 2), Rat(1, 2)), b(Colour::Black, Rat(1, 2), Rat(1, 2));
    CHECK(pillow_distance(w, b) == doctest::Approx(1.0));
    CHECK(pillow_distance(w, w) == doctest::Approx(0.0));
    // Same-face distance is the straight segment.
    SplitPoint p(Colour::White, Rat(1, 4), Rat(1, 4)), q(Colour::White, Rat(3, 4), Rat(1, 4));
    CHECK(pillow_distance(p, q) == doctest::Approx(0.5));
}

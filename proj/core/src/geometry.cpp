#include "subthurston/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <boost/multiprecision/cpp_int.hpp>

namespace subthurston {

namespace {

// t mod 2 into [0, 2); inputs may be any nonnegative rational.
Rat mod2(const Rat& t) {
    BigInt num = numerator(t), den = denominator(t);
    BigInt q = num / (2 * den);  // floor for nonnegative values
    Rat r = t - 2 * q;
    if (r < 0) r += 2;
    if (r >= 2) r -= 2;
    return r;
}

struct TorusPoint {
    Rat x, y;
};

TorusPoint lift(const SplitPoint& p) {
    if (p.face == Colour::White) return {p.x, p.y};
    return {p.x, mod2(2 - p.y)};
}

bool in_unit_square(const Rat& x, const Rat& y) {
    return x >= 0 && x <= 1 && y >= 0 && y <= 1;
}

// Quotient by z -> -z, to chart coordinates. On the glued curve the white
// face is the canonical representative.
SplitPoint fold(const Rat& tx, const Rat& ty) {
    Rat ax = mod2(tx), ay = mod2(ty);
    Rat bx = mod2(2 - ax), by = mod2(2 - ay);
    const bool a_white = in_unit_square(ax, ay);
    const bool b_white = in_unit_square(bx, by);
    if (a_white && b_white) {
        if (bx < ax || (bx == ax && by < ay)) return SplitPoint(Colour::White, bx, by);
        return SplitPoint(Colour::White, ax, ay);
    }
    if (a_white) return SplitPoint(Colour::White, ax, ay);
    if (b_white) return SplitPoint(Colour::White, bx, by);
    // Exactly one representative has x in [0,1]; its y lies in [1,2].
    if (ax >= 0 && ax <= 1) return SplitPoint(Colour::Black, ax, 2 - ay);
    return SplitPoint(Colour::Black, bx, 2 - by);
}

void check_point(const SplitPoint& p) {
    if (p.x < 0 || p.x > 1 || p.y < 0 || p.y > 1)
        throw ConfigError("SplitPoint: coordinates must lie in [0,1]");
}

void check_cell(const PillowMap& map, Cell c) {
    if (c.i >= map.s || c.j >= map.s) throw ConfigError("TileAddress: digit out of range");
}

// Lower-left integer corner of the image unit square on the torus for the
// 1-tile at (i, j) of `face`, after applying z -> s*z to its lift.
std::pair<int, int> square_origin(const PillowMap& map, Colour face, Cell cell) {
    if (face == Colour::White) return {cell.i, cell.j};
    return {cell.i, 2 * map.s - cell.j - 1};
}

}  // namespace

SplitPoint apply_map(const PillowMap& map, const SplitPoint& p) {
    check_point(p);
    TorusPoint t = lift(p);
    return fold(map.s * t.x, map.s * t.y);
}

SplitPoint apply_map_n(const PillowMap& map, SplitPoint p, int n) {
    for (int k = 0; k < n; ++k) p = apply_map(map, p);
    return p;
}

SplitPoint forward_in_cell(const PillowMap& map, Colour face, Cell cell, const SplitPoint& p) {
    check_cell(map, cell);
    check_point(p);
    auto [A, B] = square_origin(map, face, cell);
    Rat t1 = map.s * p.x;
    Rat t2 = (face == Colour::White) ? Rat(map.s * p.y) : Rat(2 * map.s - map.s * p.y);
    if (t1 < A || t1 > A + 1 || t2 < B || t2 > B + 1)
        throw AssumptionViolation("forward_in_cell: point not in the closed cell");
    const bool flip_x = (A % 2) != 0;
    const bool flip_y = (B % 2) != 0;
    Rat qx = flip_x ? Rat(A + 1 - t1) : Rat(t1 - A);
    Rat qy = flip_y ? Rat(B + 1 - t2) : Rat(t2 - B);
    Colour colour = (flip_x == flip_y) ? Colour::White : Colour::Black;
    return SplitPoint(colour, qx, qy);
}

SplitPoint branch_step(const PillowMap& map, Colour face, Cell cell, const SplitPoint& q) {
    check_cell(map, cell);
    check_point(q);
    if (q.face != cell_colour(face, cell.i, cell.j))
        throw AssumptionViolation("branch_step: point face must match the tile colour");
    auto [A, B] = square_origin(map, face, cell);
    const bool flip_x = (A % 2) != 0;
    const bool flip_y = (B % 2) != 0;
    Rat t1 = flip_x ? Rat(A + 1 - q.x) : Rat(q.x + A);
    Rat t2 = flip_y ? Rat(B + 1 - q.y) : Rat(q.y + B);
    Rat x = t1 / map.s;
    Rat y = (face == Colour::White) ? Rat(t2 / map.s) : Rat((2 * map.s - t2) / map.s);
    return SplitPoint(face, x, y);
}

BranchAffine make_branch_affine(const PillowMap& map, Colour face, Cell cell) {
    check_cell(map, cell);
    auto [A, B] = square_origin(map, face, cell);
    const bool flip_x = (A % 2) != 0;
    const bool flip_y = (B % 2) != 0;
    BranchAffine br;
    br.domain = cell_colour(face, cell.i, cell.j);
    br.range = face;
    // x' = t1/s with t1 = +-qx + const
    br.sx = flip_x ? -1 : 1;
    br.ox = flip_x ? A + 1 : A;
    // y' = t2/s on the white face, (2s - t2)/s on the black face
    if (face == Colour::White) {
        br.sy = flip_y ? -1 : 1;
        br.oy = flip_y ? B + 1 : B;
    } else {
        br.sy = flip_y ? 1 : -1;
        br.oy = flip_y ? 2 * map.s - B - 1 : 2 * map.s - B;
    }
    return br;
}

Colour address_colour(const PillowMap& map, const TileAddress& a) {
    Colour c = a.face;
    for (Cell d : a.digits) {
        check_cell(map, d);
        c = cell_colour(c, d.i, d.j);
    }
    return c;
}

TileSquare resolve_address(const PillowMap& map, const TileAddress& a) {
    const int n = a.level();
    // Colour chain: face of the k-th symbol is the colour of the previous one.
    std::vector<Colour> chain(n + 1);
    chain[0] = a.face;
    for (int k = 0; k < n; ++k) {
        check_cell(map, a.digits[k]);
        chain[k + 1] = cell_colour(chain[k], a.digits[k].i, a.digits[k].j);
    }

    // Pull the unit square of the final colour back through the branches.
    Rat lox = 0, loy = 0, hix = 1, hiy = 1;
    for (int k = n - 1; k >= 0; --k) {
        SplitPoint c0(chain[k + 1], lox, loy), c1(chain[k + 1], hix, hiy);
        SplitPoint p0 = branch_step(map, chain[k], a.digits[k], c0);
        SplitPoint p1 = branch_step(map, chain[k], a.digits[k], c1);
        lox = std::min(p0.x, p1.x);
        hix = std::max(p0.x, p1.x);
        loy = std::min(p0.y, p1.y);
        hiy = std::max(p0.y, p1.y);
    }

    TileSquare sq;
    sq.corner_x = lox;
    sq.corner_y = loy;
    sq.side = hix - lox;
    if (n == 0) sq.side = 1;
    sq.position = a.face;
    sq.colour = chain[n];
    return sq;
}

SplitPoint branch_evaluate(const PillowMap& map, const TileAddress& a, const SplitPoint& q) {
    const Colour col = address_colour(map, a);
    if (q.face != col)
        throw AssumptionViolation("branch_evaluate: point face must equal the address colour");
    const int n = a.level();
    std::vector<Colour> chain(n + 1);
    chain[0] = a.face;
    for (int k = 0; k < n; ++k) chain[k + 1] = cell_colour(chain[k], a.digits[k].i, a.digits[k].j);
    SplitPoint p = q;
    for (int k = n - 1; k >= 0; --k) p = branch_step(map, chain[k], a.digits[k], p);
    return p;
}

bool touches_curve(const PillowMap& map, const TileAddress& a) {
    TileSquare sq = resolve_address(map, a);
    return sq.corner_x == 0 || sq.corner_y == 0 || sq.corner_x + sq.side == 1 ||
           sq.corner_y + sq.side == 1;
}

double tile_diameter(const PillowMap& map, int n) {
    if (n < 0) throw ConfigError("tile_diameter: level must be >= 0");
    return std::sqrt(2.0) * std::pow(static_cast<double>(map.s), -n);
}

SplitPoint tile_center(const PillowMap& map, const TileAddress& a) {
    TileSquare sq = resolve_address(map, a);
    Rat half = sq.side / 2;
    return SplitPoint(a.face, sq.corner_x + half, sq.corner_y + half);
}

double pillow_distance(const SplitPoint& a, const SplitPoint& b) {
    TorusPoint ta = lift(a), tb = lift(b);
    auto coord_gap = [](const Rat& u, const Rat& v) {
        Rat d = mod2(u - v + 4);
        Rat alt = 2 - d;
        double g = static_cast<double>(d < alt ? d : alt);
        return g;
    };
    auto torus_dist2 = [&](const Rat& x, const Rat& y) {
        double gx = coord_gap(ta.x, x), gy = coord_gap(ta.y, y);
        return gx * gx + gy * gy;
    };
    double direct = torus_dist2(tb.x, tb.y);
    double mirrored = torus_dist2(mod2(2 - tb.x), mod2(2 - tb.y));
    return std::sqrt(std::min(direct, mirrored));
}

FixedPoint FixedPoint::from_split(const SplitPoint& p) {
    BigInt dx = denominator(p.x), dy = denominator(p.y);
    BigInt g = gcd(dx, dy);
    BigInt den = dx / g * dy;
    BigInt nx = numerator(p.x) * (den / dx);
    BigInt ny = numerator(p.y) * (den / dy);
    if (den > BigInt(std::int64_t(1) << 40))
        throw ConfigError("FixedPoint: basepoint denominator too large");
    FixedPoint r;
    r.nx = static_cast<std::int64_t>(nx);
    r.ny = static_cast<std::int64_t>(ny);
    r.den = static_cast<std::int64_t>(den);
    r.face = p.face;
    return r;
}

}  // namespace subthurston

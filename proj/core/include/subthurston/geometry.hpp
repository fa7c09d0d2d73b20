#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subthurston/util.hpp"

namespace subthurston {

// The two 0-tiles of the pillow. Values index matrix rows/columns
// throughout (white = 0, black = 1).
enum class Colour : std::uint8_t { White = 0, Black = 1 };

inline Colour opposite(Colour c) {
    return c == Colour::White ? Colour::Black : Colour::White;
}
inline std::size_t colour_index(Colour c) { return static_cast<std::size_t>(c); }
inline const char* colour_name(Colour c) { return c == Colour::White ? "white" : "black"; }

// The s-by-s grid map on the pillow sphere: two unit squares glued along
// their boundaries, realized as the torus R^2/(2Z)^2 modulo z -> -z.
// The map lifts to z -> s*z, so its degree is s^2, the glued boundary
// curve is forward invariant, and the postcritical set is the four
// corners, all fixed.
struct PillowMap {
    int s = 2;

    explicit PillowMap(int subdivision) : s(subdivision) {
        if (s < 2) throw ConfigError("PillowMap: subdivision factor must be >= 2");
    }
    int degree() const { return s * s; }
    // Expansion factor of the Euclidean model metric.
    double expansion_factor() const { return static_cast<double>(s); }
};

// A point of the split sphere: a face tag plus exact chart coordinates in
// [0,1]^2. Two points with equal coordinates on the glued boundary but
// different tags are distinct values.
struct SplitPoint {
    Colour face = Colour::White;
    Rat x, y;

    SplitPoint() = default;
    SplitPoint(Colour f, Rat px, Rat py) : face(f), x(std::move(px)), y(std::move(py)) {}

    bool operator==(const SplitPoint& o) const {
        return face == o.face && x == o.x && y == o.y;
    }
};

struct Cell {
    std::uint8_t i = 0, j = 0;
    bool operator==(const Cell& o) const { return i == o.i && j == o.j; }
    bool operator<(const Cell& o) const { return i != o.i ? i < o.i : j < o.j; }
};

// Symbolic coordinate of an n-tile. `face` is the 0-tile containing the
// tile (its position); digits[k] is the grid cell of the k-th symbol, so
// that dropping the leading digit gives the image tile under the map.
struct TileAddress {
    Colour face = Colour::White;
    std::vector<Cell> digits;

    int level() const { return static_cast<int>(digits.size()); }
};

struct TileSquare {
    Rat corner_x, corner_y;  // lower-left corner in face chart coordinates
    Rat side;
    Colour position = Colour::White;
    Colour colour = Colour::White;
};

// Colour of the 1-tile at grid cell (i, j) of a face: the face itself on
// even chequerboard parity, the opposite face on odd parity.
inline Colour cell_colour(Colour face, int i, int j) {
    return ((i + j) % 2 == 0) ? face : opposite(face);
}

// F applied to a point, computed on the torus double cover with exact
// rationals. Images landing on the glued curve are reported on the white
// face (canonical representative).
SplitPoint apply_map(const PillowMap& map, const SplitPoint& p);

// n-fold application.
SplitPoint apply_map_n(const PillowMap& map, SplitPoint p, int n);

// Closed subsquare occupied by the addressed tile, together with its
// position and colour. Throws ConfigError on a malformed digit.
TileSquare resolve_address(const PillowMap& map, const TileAddress& a);

// Colour of the addressed tile (the face its image under F^n is).
Colour address_colour(const PillowMap& map, const TileAddress& a);

// Inverse branch of F restricted to the 1-tile at `cell` of `face`,
// evaluated at q. Requires q.face == cell_colour(face, cell).
SplitPoint branch_step(const PillowMap& map, Colour face, Cell cell, const SplitPoint& q);

// Forward map restricted to the closed 1-tile at `cell` of `face`;
// unambiguous on the tile boundary (unlike apply_map, which folds to a
// canonical face).
SplitPoint forward_in_cell(const PillowMap& map, Colour face, Cell cell, const SplitPoint& p);

// (F^n|_tile)^{-1}(q) for the addressed tile. Requires q.face equal to the
// colour of the address; throws AssumptionViolation otherwise.
SplitPoint branch_evaluate(const PillowMap& map, const TileAddress& a, const SplitPoint& q);

// True iff the closed tile square meets the boundary of its face, i.e. the
// tile is not contained in the open 0-tile.
bool touches_curve(const PillowMap& map, const TileAddress& a);

// Euclidean diameter of an n-tile: sqrt(2) * s^-n.
double tile_diameter(const PillowMap& map, int n);

// Center of the addressed tile, as an exact split point tagged with the
// tile's position face.
SplitPoint tile_center(const PillowMap& map, const TileAddress& a);

// Path metric of the flat pillow (double precision; inputs are exact).
// Points on distinct faces are connected through the glued boundary.
double pillow_distance(const SplitPoint& a, const SplitPoint& b);

// True iff the point lies on the glued curve (the face boundary).
inline bool on_boundary(const SplitPoint& p) {
    return p.x == 0 || p.x == 1 || p.y == 0 || p.y == 1;
}

// ---------------------------------------------------------------------
// Fixed-denominator exact points for the branch-sum inner loops.
//
// All points reachable by inverse branches from a rational basepoint
// a/b have coordinates with denominator b * s^depth, so int64 numerators
// stay exact far beyond any feasible tree depth. The affine branch step
// below agrees with branch_step on the rational representation.
// ---------------------------------------------------------------------

struct FixedPoint {
    std::int64_t nx = 0, ny = 0;  // coordinates are nx/den, ny/den
    std::int64_t den = 1;
    Colour face = Colour::White;

    double xd() const { return static_cast<double>(nx) / static_cast<double>(den); }
    double yd() const { return static_cast<double>(ny) / static_cast<double>(den); }

    SplitPoint to_split() const {
        return SplitPoint(face, Rat(nx, den), Rat(ny, den));
    }
    static FixedPoint from_split(const SplitPoint& p);
};

// Precomputed affine data for one selected 1-tile; see branch_step.
// x' = (ox*den + sx*nx) / (s*den), likewise y. Signs are +-1.
struct BranchAffine {
    std::int32_t ox = 0, oy = 0;
    std::int8_t sx = 1, sy = 1;
    Colour domain = Colour::White;  // colour of the tile = face of valid inputs
    Colour range = Colour::White;   // position of the tile = face of outputs

    FixedPoint apply(const FixedPoint& p, int s) const {
        FixedPoint r;
        r.nx = static_cast<std::int64_t>(ox) * p.den + static_cast<std::int64_t>(sx) * p.nx;
        r.ny = static_cast<std::int64_t>(oy) * p.den + static_cast<std::int64_t>(sy) * p.ny;
        r.den = p.den * s;
        r.face = range;
        return r;
    }
};

BranchAffine make_branch_affine(const PillowMap& map, Colour face, Cell cell);

}  // namespace subthurston

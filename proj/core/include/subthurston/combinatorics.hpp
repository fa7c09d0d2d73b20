#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "subthurston/geometry.hpp"
#include "subthurston/util.hpp"

namespace subthurston {

// One selected 1-tile: its position face, grid cell, and derived colour.
struct Tile1 {
    Colour position = Colour::White;
    Cell cell;
    Colour colour = Colour::White;

    bool operator<(const Tile1& o) const {
        if (position != o.position) return colour_index(position) < colour_index(o.position);
        return cell < o.cell;
    }
    bool operator==(const Tile1& o) const { return position == o.position && cell == o.cell; }
};

// 2x2 integer count of 1-tiles by (position row, colour column):
//   [[N_ww, N_bw],
//    [N_wb, N_bb]]
// where N_{cc'} counts colour-c tiles contained in the 0-tile of c'.
struct TileMatrix {
    std::array<std::array<BigInt, 2>, 2> m{};  // m[position][colour]

    BigInt& at(Colour position, Colour colour) {
        return m[colour_index(position)][colour_index(colour)];
    }
    const BigInt& at(Colour position, Colour colour) const {
        return m[colour_index(position)][colour_index(colour)];
    }
    TileMatrix operator*(const TileMatrix& o) const;
    TileMatrix pow(int n) const;
    static TileMatrix identity();
    BigInt total() const { return m[0][0] + m[0][1] + m[1][0] + m[1][1]; }
    // Number of tiles of the given colour (all positions).
    BigInt colour_count(Colour c) const {
        return m[0][colour_index(c)] + m[1][colour_index(c)];
    }
    // Number of tiles contained in the given 0-tile.
    BigInt position_count(Colour c) const {
        return m[colour_index(c)][0] + m[colour_index(c)][1];
    }
    bool operator==(const TileMatrix& o) const { return m == o.m; }
};

enum class MatrixClass { Degenerate, Isolated, Regular };
const char* matrix_class_name(MatrixClass c);

// Degenerate: a zero position row. Isolated: a 0-tile containing exactly
// its own fixed tile ([[1,0],[*,*]] or [[*,*],[0,1]]), or the swap matrix.
MatrixClass classify_matrix(const TileMatrix& A);

// Counts of n-tiles at a point, by (position row, colour column), plus the
// aggregates used as degrees.
struct DegreeMatrix {
    std::array<std::array<std::int64_t, 2>, 2> m{};

    std::int64_t colour_degree(Colour c) const {
        return m[0][colour_index(c)] + m[1][colour_index(c)];
    }
    std::int64_t local_degree() const {
        return std::max(colour_degree(Colour::White), colour_degree(Colour::Black));
    }
    std::int64_t total() const { return m[0][0] + m[0][1] + m[1][0] + m[1][1]; }
};

// B[c'][c] = a colour-c n-tile exists strictly inside the 0-tile of c'.
struct InteriorMatrix {
    std::array<std::array<bool, 2>, 2> b{};
    bool all() const { return b[0][0] && b[0][1] && b[1][0] && b[1][1]; }
};

class Subsystem {
  public:
    Subsystem(PillowMap map, std::vector<Tile1> selected);

    static Subsystem full(int s);
    // 3x3 grid with the centre cell of each face removed.
    static Subsystem carpet();

    const PillowMap& map() const { return map_; }
    const std::vector<Tile1>& tiles() const { return tiles_; }
    int tile_count() const { return static_cast<int>(tiles_.size()); }
    const Tile1& tile(int id) const { return tiles_[static_cast<std::size_t>(id)]; }

    // Symbol ids admissible after a symbol of the given colour
    // (equivalently: tiles positioned in that 0-tile).
    const std::vector<int>& continuations(Colour colour) const {
        return by_position_[colour_index(colour)];
    }
    // Symbol ids of the given colour (the branches above a point of that face).
    const std::vector<int>& of_colour(Colour colour) const {
        return by_colour_[colour_index(colour)];
    }

    bool colour_in_set(Colour c) const { return colour_set_[colour_index(c)]; }
    // F(dom F) = S^2, i.e. both colours occur among the selected tiles.
    bool surjective() const { return colour_set_[0] && colour_set_[1]; }
    void require_surjective(const char* who) const;

    std::string describe() const;

  private:
    PillowMap map_;
    std::vector<Tile1> tiles_;
    std::array<std::vector<int>, 2> by_position_;
    std::array<std::vector<int>, 2> by_colour_;
    std::array<bool, 2> colour_set_{};
};

struct TileEnumeration {
    std::vector<TileAddress> tiles;
    // Set when a non-surjective subsystem yields no n-tiles.
    bool empty_warning = false;
};

// All n-tiles, in lexicographic symbol order. Throws BudgetExceeded when
// the count exceeds `budget`.
TileEnumeration enumerate_tiles(const Subsystem& sub, int n, std::size_t budget = 2'000'000);

// Count of n-tiles by (position, colour), computed by the matrix power.
TileMatrix tile_matrix(const Subsystem& sub);
TileMatrix tile_matrix_level(const Subsystem& sub, int n);

// Count of n-tiles by (position, colour) via explicit path traversal;
// independent of the matrix-power route. Budget-guarded by node count.
TileMatrix count_tiles_by_walk(const Subsystem& sub, int n, std::size_t node_budget = 400'000'000);

// n-tiles of each (colour, position) whose closed square contains the
// underlying sphere point of p (both charts when p lies on the curve).
DegreeMatrix local_degree_matrix(const Subsystem& sub, const SplitPoint& p, int n);

// Existence of interior tiles per (position, colour) at one level.
InteriorMatrix interior_matrix(const Subsystem& sub, int n);

enum class Tristate { False, True, Unknown };
const char* tristate_name(Tristate t);

struct StructureReport {
    // Decided exactly from the colour graph.
    bool irreducible = false;
    bool primitive = false;
    // Interior variants; Unknown when max_level was exhausted.
    Tristate strongly_irreducible = Tristate::Unknown;
    Tristate strongly_primitive = Tristate::Unknown;
    std::optional<int> witness;  // n_F for the strongest certified property
    int max_level = 0;
    std::vector<InteriorMatrix> interior_levels;  // index 0 <-> level 1
};

StructureReport check_structure(const Subsystem& sub, int max_level);

// Matrix-only variant for abstract tile matrices (no geometry): the
// interior-based strong properties stay Unknown unless plainly False.
StructureReport check_structure_matrix(const TileMatrix& A);

struct LimitSetReport {
    bool every_tile_meets_limitset = true;
    // Number of n-tiles per position face admitting infinite continuations.
    std::array<BigInt, 2> per_face_path_count{};
    bool isolated_point_risk = false;
    int level = 1;
};

LimitSetReport limit_set_diagnostics(const Subsystem& sub, int n);
LimitSetReport limit_set_diagnostics_matrix(const TileMatrix& A, int n);

struct TransitivityReport {
    bool transitive = false;
    bool mixing = false;
};

TransitivityReport transitivity_report(const Subsystem& sub);

}  // namespace subthurston

#include "subthurston/combinatorics.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>

namespace subthurston {

TileMatrix TileMatrix::operator*(const TileMatrix& o) const {
    TileMatrix r;
    for (int p = 0; p < 2; ++p)
        for (int c = 0; c < 2; ++c)
            r.m[p][c] = m[p][0] * o.m[0][c] + m[p][1] * o.m[1][c];
    return r;
}

TileMatrix TileMatrix::identity() {
    TileMatrix r;
    r.m[0][0] = 1;
    r.m[1][1] = 1;
    return r;
}

TileMatrix TileMatrix::pow(int n) const {
    if (n < 0) throw ConfigError("TileMatrix::pow: negative exponent");
    TileMatrix r = identity();
    TileMatrix base = *this;
    while (n > 0) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

const char* matrix_class_name(MatrixClass c) {
    switch (c) {
        case MatrixClass::Degenerate: return "degenerate";
        case MatrixClass::Isolated: return "isolated";
        case MatrixClass::Regular: return "regular";
    }
    return "?";
}

MatrixClass classify_matrix(const TileMatrix& A) {
    const auto& m = A.m;
    if ((m[0][0] == 0 && m[0][1] == 0) || (m[1][0] == 0 && m[1][1] == 0))
        return MatrixClass::Degenerate;
    // A 0-tile whose only tile is its own colour's fixed copy, or the swap.
    if (m[0][0] == 1 && m[0][1] == 0) return MatrixClass::Isolated;
    if (m[1][1] == 1 && m[1][0] == 0) return MatrixClass::Isolated;
    if (m[0][0] == 0 && m[0][1] == 1 && m[1][0] == 1 && m[1][1] == 0)
        return MatrixClass::Isolated;
    return MatrixClass::Regular;
}

Subsystem::Subsystem(PillowMap map, std::vector<Tile1> selected) : map_(map) {
    if (selected.empty()) throw ConfigError("Subsystem: selected tile set must be non-empty");
    for (auto& t : selected) {
        if (t.cell.i >= map_.s || t.cell.j >= map_.s)
            throw ConfigError("Subsystem: tile cell out of range");
        t.colour = cell_colour(t.position, t.cell.i, t.cell.j);
    }
    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    tiles_ = std::move(selected);
    for (int id = 0; id < static_cast<int>(tiles_.size()); ++id) {
        const Tile1& t = tiles_[static_cast<std::size_t>(id)];
        by_position_[colour_index(t.position)].push_back(id);
        by_colour_[colour_index(t.colour)].push_back(id);
        colour_set_[colour_index(t.colour)] = true;
    }
}

Subsystem Subsystem::full(int s) {
    PillowMap map(s);
    std::vector<Tile1> sel;
    for (Colour face : {Colour::White, Colour::Black})
        for (std::uint8_t i = 0; i < s; ++i)
            for (std::uint8_t j = 0; j < s; ++j) sel.push_back({face, {i, j}, Colour::White});
    return Subsystem(map, std::move(sel));
}

Subsystem Subsystem::carpet() {
    PillowMap map(3);
    std::vector<Tile1> sel;
    for (Colour face : {Colour::White, Colour::Black})
        for (std::uint8_t i = 0; i < 3; ++i)
            for (std::uint8_t j = 0; j < 3; ++j) {
                if (i == 1 && j == 1) continue;
                sel.push_back({face, {i, j}, Colour::White});
            }
    return Subsystem(map, std::move(sel));
}

void Subsystem::require_surjective(const char* who) const {
    if (!surjective())
        throw AssumptionViolation(std::string(who) +
                                  ": requires a surjective subsystem (both tile colours present)");
}

std::string Subsystem::describe() const {
    std::ostringstream os;
    TileMatrix A = tile_matrix(*this);
    os << "subsystem of the " << map_.s << "x" << map_.s << " pillow map, " << tiles_.size()
       << " selected 1-tiles, tile matrix [[" << A.m[0][0] << "," << A.m[0][1] << "],["
       << A.m[1][0] << "," << A.m[1][1] << "]]";
    return os.str();
}

TileMatrix tile_matrix(const Subsystem& sub) {
    TileMatrix A;
    for (const Tile1& t : sub.tiles()) A.at(t.position, t.colour) += 1;
    return A;
}

TileMatrix tile_matrix_level(const Subsystem& sub, int n) {
    if (n < 0) throw ConfigError("tile_matrix_level: level must be >= 0");
    return tile_matrix(sub).pow(n);
}

TileEnumeration enumerate_tiles(const Subsystem& sub, int n, std::size_t budget) {
    if (n < 0) throw ConfigError("enumerate_tiles: level must be >= 0");
    TileEnumeration out;
    if (n == 0) {
        for (Colour c : {Colour::White, Colour::Black})
            if (sub.colour_in_set(c)) out.tiles.push_back(TileAddress{c, {}});
        return out;
    }
    BigInt total = tile_matrix_level(sub, n).total();
    if (total > BigInt(budget))
        throw BudgetExceeded("enumerate_tiles: level-" + std::to_string(n) + " tile count " +
                             total.str() + " exceeds budget " + std::to_string(budget));

    std::vector<int> word;
    TileAddress addr;
    auto emit = [&]() {
        addr.face = sub.tile(word.front()).position;
        addr.digits.clear();
        for (int id : word) addr.digits.push_back(sub.tile(id).cell);
        out.tiles.push_back(addr);
    };
    // Depth-first over symbols in id order; ids are sorted by (face, cell).
    std::vector<std::pair<int, int>> stack;  // (symbol id, depth)
    for (int id = sub.tile_count() - 1; id >= 0; --id) stack.push_back({id, 1});
    while (!stack.empty()) {
        auto [id, depth] = stack.back();
        stack.pop_back();
        word.resize(static_cast<std::size_t>(depth));
        word[static_cast<std::size_t>(depth) - 1] = id;
        const Tile1& t = sub.tile(id);
        if (depth == n) {
            if (sub.colour_in_set(t.colour)) emit();
            continue;
        }
        const auto& next = sub.continuations(t.colour);
        for (auto it = next.rbegin(); it != next.rend(); ++it) stack.push_back({*it, depth + 1});
    }
    if (out.tiles.empty() && !sub.surjective()) out.empty_warning = true;
    return out;
}

TileMatrix count_tiles_by_walk(const Subsystem& sub, int n, std::size_t node_budget) {
    if (n < 1) throw ConfigError("count_tiles_by_walk: level must be >= 1");
    if (n > 12) throw BudgetExceeded("count_tiles_by_walk: level too deep for explicit walk");
    BigInt predicted = tile_matrix_level(sub, n).total();
    if (predicted > BigInt(node_budget))
        throw BudgetExceeded("count_tiles_by_walk: predicted node count exceeds budget");

    const int m = sub.tile_count();
    // One chunk per leading symbol; exact integer counts, combined after.
    std::vector<std::array<std::array<std::uint64_t, 2>, 2>> partial(
        static_cast<std::size_t>(m));
    parallel_chunks(static_cast<std::size_t>(m), [&](std::size_t chunk) {
        auto& acc = partial[chunk];
        acc = {};
        const Tile1& first = sub.tile(static_cast<int>(chunk));
        struct Frame {
            int id;
            int depth;
        };
        std::vector<Frame> stack{{static_cast<int>(chunk), 1}};
        while (!stack.empty()) {
            Frame f = stack.back();
            stack.pop_back();
            const Tile1& t = sub.tile(f.id);
            if (f.depth == n) {
                if (sub.colour_in_set(t.colour))
                    acc[colour_index(first.position)][colour_index(t.colour)] += 1;
                continue;
            }
            for (int next : sub.continuations(t.colour)) stack.push_back({next, f.depth + 1});
        }
    });
    TileMatrix out;
    for (const auto& acc : partial)
        for (int p = 0; p < 2; ++p)
            for (int c = 0; c < 2; ++c) out.m[p][c] += acc[p][c];
    return out;
}

DegreeMatrix local_degree_matrix(const Subsystem& sub, const SplitPoint& p, int n) {
    if (n < 1) throw ConfigError("local_degree_matrix: level must be >= 1");
    if (p.x < 0 || p.x > 1 || p.y < 0 || p.y > 1)
        throw ConfigError("local_degree_matrix: invalid point");
    DegreeMatrix deg;

    // Recurse over containing cells; fn(face, q, depth, rootFace, lastColour).
    struct Walker {
        const Subsystem& sub;
        const PillowMap& map;
        DegreeMatrix& deg;
        int n;

        void walk(Colour face, const SplitPoint& q, int depth, Colour root) {
            for (int id : sub.continuations(face)) {  // tiles positioned in `face`
                const Tile1& t = sub.tile(id);
                Rat sx = map.s * q.x, sy = map.s * q.y;
                if (sx < t.cell.i || sx > t.cell.i + 1 || sy < t.cell.j || sy > t.cell.j + 1)
                    continue;
                if (depth == n) {
                    deg.m[colour_index(root)][colour_index(t.colour)] += 1;
                } else {
                    SplitPoint img = forward_in_cell(map, face, t.cell, q);
                    walk(t.colour, img, depth + 1, root);
                }
            }
        }
    } walker{sub, sub.map(), deg, n};

    walker.walk(p.face, p, 1, p.face);
    if (on_boundary(p)) {
        SplitPoint mirror(opposite(p.face), p.x, p.y);
        walker.walk(mirror.face, mirror, 1, mirror.face);
    }
    return deg;
}

namespace {

// Edge c' -> c iff a selected tile of colour c sits in the 0-tile of c'.
std::array<std::array<bool, 2>, 2> edge_sign(const TileMatrix& A) {
    std::array<std::array<bool, 2>, 2> e{};
    for (int p = 0; p < 2; ++p)
        for (int c = 0; c < 2; ++c) e[p][c] = A.m[p][c] > 0;
    return e;
}

std::array<std::array<bool, 2>, 2> bool_mul(const std::array<std::array<bool, 2>, 2>& a,
                                            const std::array<std::array<bool, 2>, 2>& b) {
    std::array<std::array<bool, 2>, 2> r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = (a[i][0] && b[0][j]) || (a[i][1] && b[1][j]);
    return r;
}

}  // namespace

InteriorMatrix interior_matrix(const Subsystem& sub, int n) {
    if (n < 1) throw ConfigError("interior_matrix: level must be >= 1");
    const PillowMap& map = sub.map();
    const int s = map.s;
    if (n > 36) throw BudgetExceeded("interior_matrix: level too deep");

    // reach[k][c0][c]: a length-k word from colour class c0 ending in colour c.
    std::vector<std::array<std::array<bool, 2>, 2>> reach(static_cast<std::size_t>(n) + 1);
    reach[0] = {{{true, false}, {false, true}}};
    auto edges = edge_sign(tile_matrix(sub));
    for (int k = 1; k <= n; ++k)
        reach[static_cast<std::size_t>(k)] = bool_mul(reach[static_cast<std::size_t>(k) - 1], edges);

    InteriorMatrix out;

    // DFS over words from one position face, tracking the affine image of
    // the unit square: x |-> (sx*x + tx)/den with den = s^depth. A tile
    // strictly inside the face keeps all its descendants inside, so the
    // walk only ever expands boundary-touching squares.
    struct Frame {
        int id;
        int depth;
        std::int64_t txl, tyl;  // lower corner numerators (over s^depth)
    };
    for (Colour pos : {Colour::White, Colour::Black}) {
        std::vector<Frame> stack;
        std::vector<std::int64_t> pow_s(static_cast<std::size_t>(n) + 1, 1);
        for (int k = 1; k <= n; ++k)
            pow_s[static_cast<std::size_t>(k)] = pow_s[static_cast<std::size_t>(k) - 1] * s;

        // Compose the root affine (identity) with each first symbol.
        struct Aff {
            std::int64_t tx, ty;
            std::int8_t sx, sy;
        };
        std::vector<Aff> affs;  // parallel to stack entries
        auto push_child = [&](int id, int depth, const Aff& parent) {
            const Tile1& t = sub.tile(id);
            BranchAffine br = make_branch_affine(map, t.position, t.cell);
            Aff a;
            a.sx = static_cast<std::int8_t>(parent.sx * br.sx);
            a.sy = static_cast<std::int8_t>(parent.sy * br.sy);
            a.tx = parent.sx * static_cast<std::int64_t>(br.ox) + s * parent.tx;
            a.ty = parent.sy * static_cast<std::int64_t>(br.oy) + s * parent.ty;
            std::int64_t den = pow_s[static_cast<std::size_t>(depth)];
            std::int64_t lox = a.sx > 0 ? a.tx : a.tx - 1;
            std::int64_t loy = a.sy > 0 ? a.ty : a.ty - 1;
            const bool interior = lox > 0 && lox + 1 < den && loy > 0 && loy + 1 < den;
            if (interior) {
                const auto& r = reach[static_cast<std::size_t>(n - depth)];
                for (int c = 0; c < 2; ++c)
                    if (r[colour_index(t.colour)][c])
                        out.b[colour_index(pos)][c] = true;
                return;  // prune: descendants cannot change the answer
            }
            if (depth == n) return;
            stack.push_back({id, depth, lox, loy});
            affs.push_back(a);
        };

        Aff root{0, 0, 1, 1};
        for (int id : sub.continuations(pos)) push_child(id, 1, root);
        while (!stack.empty()) {
            Frame f = stack.back();
            Aff a = affs.back();
            stack.pop_back();
            affs.pop_back();
            const Tile1& t = sub.tile(f.id);
            for (int next : sub.continuations(t.colour)) push_child(next, f.depth + 1, a);
            if (out.b[colour_index(pos)][0] && out.b[colour_index(pos)][1] &&
                out.b[colour_index(opposite(pos))][0] && out.b[colour_index(opposite(pos))][1])
                break;
        }
    }
    return out;
}

const char* tristate_name(Tristate t) {
    switch (t) {
        case Tristate::False: return "false";
        case Tristate::True: return "true";
        case Tristate::Unknown: return "unknown";
    }
    return "?";
}

StructureReport check_structure(const Subsystem& sub, int max_level) {
    if (max_level < 1) throw ConfigError("check_structure: max_level must be >= 1");
    StructureReport rep;
    rep.max_level = max_level;

    TileMatrix A = tile_matrix(sub);
    auto e = edge_sign(A);
    auto e2 = bool_mul(e, e);
    bool irr = true;
    for (int p = 0; p < 2; ++p)
        for (int c = 0; c < 2; ++c) irr = irr && (e[p][c] || e2[p][c]);
    rep.irreducible = irr;
    // For a two-colour graph: primitive iff irreducible and aperiodic, and
    // aperiodicity is exactly the presence of a self-loop.
    rep.primitive = irr && (e[0][0] || e[1][1]);

    for (int n = 1; n <= max_level; ++n) rep.interior_levels.push_back(interior_matrix(sub, n));

    if (!rep.irreducible) {
        rep.strongly_irreducible = Tristate::False;
        rep.strongly_primitive = Tristate::False;
        return rep;
    }

    // Strong irreducibility: each (position, colour) pair witnessed at some level.
    std::array<std::array<bool, 2>, 2> seen{};
    int witness_irr = 0;
    for (int n = 1; n <= max_level; ++n) {
        bool all = true;
        for (int p = 0; p < 2; ++p)
            for (int c = 0; c < 2; ++c) {
                seen[p][c] = seen[p][c] || rep.interior_levels[static_cast<std::size_t>(n) - 1].b[p][c];
                all = all && seen[p][c];
            }
        if (all) {
            witness_irr = n;
            break;
        }
    }
    rep.strongly_irreducible = witness_irr > 0 ? Tristate::True : Tristate::Unknown;

    if (!rep.primitive) {
        rep.strongly_primitive = Tristate::False;
        if (witness_irr > 0) rep.witness = witness_irr;
        return rep;
    }

    // Strong primitivity: all-true interior matrices at two consecutive
    // levels n*, n*+1 certify every level in the semigroup they generate;
    // the finitely many gaps below n*(n*-1) are checked directly.
    std::vector<bool> all_true(static_cast<std::size_t>(max_level) + 1, false);
    for (int n = 1; n <= max_level; ++n)
        all_true[static_cast<std::size_t>(n)] = rep.interior_levels[static_cast<std::size_t>(n) - 1].all();
    int certified = 0;
    for (int n = 1; n + 1 <= max_level && certified == 0; ++n) {
        if (!(all_true[static_cast<std::size_t>(n)] && all_true[static_cast<std::size_t>(n) + 1]))
            continue;
        // Coverage of every level >= n by sums of certified levels.
        int horizon = n * (n + 1);
        std::vector<bool> covered(static_cast<std::size_t>(horizon) + 1, false);
        for (int k = 1; k <= std::min(max_level, horizon); ++k)
            covered[static_cast<std::size_t>(k)] = all_true[static_cast<std::size_t>(k)];
        for (int k = 2; k <= horizon; ++k)
            for (int a = 1; a < k && !covered[static_cast<std::size_t>(k)]; ++a)
                covered[static_cast<std::size_t>(k)] =
                    covered[static_cast<std::size_t>(a)] && covered[static_cast<std::size_t>(k) - a];
        bool ok = true;
        for (int k = n; k <= horizon; ++k) ok = ok && covered[static_cast<std::size_t>(k)];
        if (ok) certified = n;
    }
    if (certified > 0) {
        rep.strongly_primitive = Tristate::True;
        rep.witness = certified;
    } else {
        rep.strongly_primitive = Tristate::Unknown;
        if (witness_irr > 0) rep.witness = witness_irr;
    }
    return rep;
}

StructureReport check_structure_matrix(const TileMatrix& A) {
    StructureReport rep;
    rep.max_level = 0;
    auto e = edge_sign(A);
    auto e2 = bool_mul(e, e);
    bool irr = true;
    for (int p = 0; p < 2; ++p)
        for (int c = 0; c < 2; ++c) irr = irr && (e[p][c] || e2[p][c]);
    rep.irreducible = irr;
    rep.primitive = irr && (e[0][0] || e[1][1]);
    rep.strongly_irreducible = irr ? Tristate::Unknown : Tristate::False;
    rep.strongly_primitive = rep.primitive ? Tristate::Unknown : Tristate::False;
    return rep;
}

namespace {

LimitSetReport limit_set_from_matrix(const TileMatrix& A, int n) {
    LimitSetReport rep;
    rep.level = n;
    std::array<bool, 2> alive{true, true};
    for (int pass = 0; pass < 3; ++pass) {
        std::array<bool, 2> next{};
        for (int pos = 0; pos < 2; ++pos)
            for (int c = 0; c < 2; ++c)
                if (A.m[pos][c] > 0)
                    next[static_cast<std::size_t>(pos)] =
                        next[static_cast<std::size_t>(pos)] || alive[static_cast<std::size_t>(c)];
        alive = next;
    }
    bool stranded = false;
    for (int pos = 0; pos < 2; ++pos)
        for (int c = 0; c < 2; ++c)
            if (A.m[pos][c] > 0 && !alive[static_cast<std::size_t>(c)]) stranded = true;
    rep.every_tile_meets_limitset = !stranded;

    TileMatrix An = A.pow(n);
    for (int p = 0; p < 2; ++p) {
        BigInt cnt = 0;
        for (int c = 0; c < 2; ++c)
            if (alive[static_cast<std::size_t>(c)]) cnt += An.m[p][c];
        rep.per_face_path_count[static_cast<std::size_t>(p)] = cnt;
    }
    rep.isolated_point_risk =
        rep.per_face_path_count[0] < 2 || rep.per_face_path_count[1] < 2;
    return rep;
}

}  // namespace

LimitSetReport limit_set_diagnostics_matrix(const TileMatrix& A, int n) {
    if (n < 1) throw ConfigError("limit_set_diagnostics: level must be >= 1");
    return limit_set_from_matrix(A, n);
}

LimitSetReport limit_set_diagnostics(const Subsystem& sub, int n) {
    if (n < 1) throw ConfigError("limit_set_diagnostics: level must be >= 1");
    return limit_set_from_matrix(tile_matrix(sub), n);
}

TransitivityReport transitivity_report(const Subsystem& sub) {
    StructureReport s = check_structure(sub, 1);
    return TransitivityReport{s.irreducible, s.primitive};
}

}  // namespace subthurston

#include "subthurston/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subthurston/detail/walk.hpp"

namespace subthurston {

namespace {

BigInt preimage_node_count(const Subsystem& sub, Colour base_face, int n) {
    TileMatrix A = tile_matrix(sub);
    BigInt nodes = 0;
    TileMatrix P = TileMatrix::identity();
    for (int j = 1; j <= n; ++j) {
        P = P * A;
        nodes += P.colour_count(base_face);
    }
    return nodes;
}

void check_walk_budget(const Subsystem& sub, Colour base_face, int n, std::size_t budget,
                       const char* who) {
    if (preimage_node_count(sub, base_face, n) > BigInt(budget))
        throw BudgetExceeded(std::string(who) + ": branch tree exceeds node budget");
}

double c1_constant(const Subsystem& sub, const Potential& phi) {
    HolderData h = phi.holder_data();
    double lam = sub.map().expansion_factor();
    return h.H / (1.0 - std::pow(lam, -h.alpha));
}

}  // namespace

// ---------------------------------------------------------------------
// TileIndex
// ---------------------------------------------------------------------

TileIndex::TileIndex(Subsystem sub, int depth, std::size_t budget) : sub_(std::move(sub)), depth_(depth) {
    if (depth_ < 1) throw ConfigError("TileIndex: depth must be >= 1");
    sub_.require_surjective("TileIndex");
    base_ = static_cast<std::uint64_t>(sub_.tile_count());
    msb_ = 1;
    for (int k = 1; k < depth_; ++k) {
        if (msb_ > (std::uint64_t(1) << 62) / base_)
            throw BudgetExceeded("TileIndex: radix overflow at this depth");
        msb_ *= base_;
    }
    BigInt count = tile_matrix_level(sub_, depth_).total();
    if (count > BigInt(budget)) throw BudgetExceeded("TileIndex: tile count exceeds budget");

    const std::size_t n = static_cast<std::size_t>(count);
    words_.reserve(n * static_cast<std::size_t>(depth_));
    radix_.reserve(n);

    std::vector<std::int8_t> word(static_cast<std::size_t>(depth_));
    struct Frame {
        int id;
        int depth;
    };
    std::vector<Frame> stack;
    for (int id = sub_.tile_count() - 1; id >= 0; --id) stack.push_back({id, 1});
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        word[static_cast<std::size_t>(d - 1)] = static_cast<std::int8_t>(id);
        const Tile1& t = sub_.tile(id);
        if (d == depth_) {
            std::uint64_t rad = 0;
            for (int k = 0; k < depth_; ++k)
                rad = rad * base_ + static_cast<std::uint64_t>(word[static_cast<std::size_t>(k)]);
            words_.insert(words_.end(), word.begin(), word.end());
            radix_.push_back(rad);
            continue;
        }
        const auto& next = sub_.continuations(t.colour);
        for (auto it = next.rbegin(); it != next.rend(); ++it) stack.push_back({*it, d + 1});
    }
    // Lexicographic emission order makes radix_ strictly increasing, and
    // puts every white-position word before the black ones.
    white_count_ = 0;
    while (white_count_ < radix_.size() &&
           sub_.tile(words_[white_count_ * static_cast<std::size_t>(depth_)]).position ==
               Colour::White)
        ++white_count_;
}

std::size_t TileIndex::lookup(std::uint64_t r) const {
    auto it = std::lower_bound(radix_.begin(), radix_.end(), r);
    if (it == radix_.end() || *it != r)
        throw AssumptionViolation("TileIndex: cylinder not present at this depth");
    return static_cast<std::size_t>(it - radix_.begin());
}

TileAddress TileIndex::address(std::size_t i) const {
    TileAddress a;
    const std::int8_t* w = word(i);
    a.face = sub_.tile(w[0]).position;
    for (int k = 0; k < depth_; ++k) a.digits.push_back(sub_.tile(w[k]).cell);
    return a;
}

FixedPoint TileIndex::center(std::size_t i) const {
    const std::int8_t* w = word(i);
    FixedPoint p;
    p.nx = 1;
    p.ny = 1;
    p.den = 2;
    p.face = sub_.tile(w[depth_ - 1]).colour;
    for (int k = depth_ - 1; k >= 0; --k) {
        const Tile1& t = sub_.tile(w[k]);
        p = make_branch_affine(map(), t.position, t.cell).apply(p, map().s);
    }
    return p;
}

std::size_t TileIndex::locate(const SplitPoint& p) const {
    const PillowMap& m = map();
    SplitPoint cur = p;
    std::uint64_t rad = 0;
    for (int k = 0; k < depth_; ++k) {
        int found = -1;
        for (int id : sub_.continuations(cur.face)) {
            const Tile1& t = sub_.tile(id);
            Rat sx = m.s * cur.x, sy = m.s * cur.y;
            if (sx < t.cell.i || sx > t.cell.i + 1 || sy < t.cell.j || sy > t.cell.j + 1)
                continue;
            found = id;
            break;
        }
        if (found < 0)
            throw AssumptionViolation("TileIndex::locate: point outside the level-" +
                                      std::to_string(depth_) + " domain");
        const Tile1& t = sub_.tile(found);
        rad = rad * base_ + static_cast<std::uint64_t>(found);
        cur = forward_in_cell(m, cur.face, t.cell, cur);
    }
    return lookup(rad);
}

double SplitFunction::sup_norm() const {
    double s = 0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
}

double TileMeasure::total() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
}

std::array<double, 2> TileMeasure::face_mass() const {
    std::array<double, 2> m{0, 0};
    for (std::size_t i = 0; i < weights.size(); ++i)
        m[colour_index(index->face(i))] += weights[i];
    return m;
}

// ---------------------------------------------------------------------
// TransferMatrix
// ---------------------------------------------------------------------

TransferMatrix::TransferMatrix(std::shared_ptr<const TileIndex> index, const Potential& phi)
    : index_(std::move(index)), const_shift_(phi.constant_part()) {
    const TileIndex& ix = *index_;
    const Subsystem& sub = ix.sub();
    const int s = ix.map().s;
    Potential phi0 = phi.centered();

    const std::size_t n = ix.size();
    rowptr_.assign(n + 1, 0);
    std::vector<BranchAffine> branch(static_cast<std::size_t>(sub.tile_count()));
    for (int id = 0; id < sub.tile_count(); ++id) {
        const Tile1& t = sub.tile(id);
        branch[static_cast<std::size_t>(id)] = make_branch_affine(ix.map(), t.position, t.cell);
    }
    for (std::size_t i = 0; i < n; ++i)
        rowptr_[i + 1] = rowptr_[i] +
                         static_cast<std::int64_t>(sub.of_colour(ix.face(i)).size());
    col_.resize(static_cast<std::size_t>(rowptr_[n]));
    val_.resize(static_cast<std::size_t>(rowptr_[n]));

    parallel_chunks(n < 1024 ? 1 : 64, [&](std::size_t chunk) {
        std::size_t chunks = n < 1024 ? 1 : 64;
        std::size_t lo = n * chunk / chunks, hi = n * (chunk + 1) / chunks;
        for (std::size_t i = lo; i < hi; ++i) {
            FixedPoint cw = ix.center(i);
            std::int64_t at = rowptr_[i];
            for (int u : sub.of_colour(ix.face(i))) {
                FixedPoint c2 = branch[static_cast<std::size_t>(u)].apply(cw, s);
                col_[static_cast<std::size_t>(at)] =
                    static_cast<std::int32_t>(ix.trunc_index(u, i));
                val_[static_cast<std::size_t>(at)] = std::exp(phi0.eval(c2));
                ++at;
            }
        }
    });

    // Transpose for the left iteration.
    rowptr_t_.assign(n + 1, 0);
    for (std::int32_t c : col_) ++rowptr_t_[static_cast<std::size_t>(c) + 1];
    for (std::size_t i = 0; i < n; ++i) rowptr_t_[i + 1] += rowptr_t_[i];
    col_t_.resize(col_.size());
    val_t_.resize(val_.size());
    std::vector<std::int64_t> cursor(rowptr_t_.begin(), rowptr_t_.end() - 1);
    for (std::size_t r = 0; r < n; ++r)
        for (std::int64_t k = rowptr_[r]; k < rowptr_[r + 1]; ++k) {
            std::size_t c = static_cast<std::size_t>(col_[static_cast<std::size_t>(k)]);
            std::int64_t at = cursor[c]++;
            col_t_[static_cast<std::size_t>(at)] = static_cast<std::int32_t>(r);
            val_t_[static_cast<std::size_t>(at)] = val_[static_cast<std::size_t>(k)];
        }
}

void TransferMatrix::multiply(const std::vector<double>& in, std::vector<double>& out) const {
    const std::size_t n = rows();
    out.assign(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        double acc = 0;
        for (std::int64_t k = rowptr_[r]; k < rowptr_[r + 1]; ++k)
            acc += val_[static_cast<std::size_t>(k)] *
                   in[static_cast<std::size_t>(col_[static_cast<std::size_t>(k)])];
        out[r] = acc;
    }
}

void TransferMatrix::multiply_transpose(const std::vector<double>& in,
                                        std::vector<double>& out) const {
    const std::size_t n = rows();
    out.assign(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        double acc = 0;
        for (std::int64_t k = rowptr_t_[r]; k < rowptr_t_[r + 1]; ++k)
            acc += val_t_[static_cast<std::size_t>(k)] *
                   in[static_cast<std::size_t>(col_t_[static_cast<std::size_t>(k)])];
        out[r] = acc;
    }
}

double TransferMatrix::entry_sum_row(std::size_t r) const {
    double acc = 0;
    for (std::int64_t k = rowptr_[r]; k < rowptr_[r + 1]; ++k)
        acc += val_[static_cast<std::size_t>(k)];
    return acc;
}

// ---------------------------------------------------------------------
// Spectral solving
// ---------------------------------------------------------------------

namespace {

struct PowerResult {
    std::vector<double> v;
    double lambda = 0;
    int iterations = 0;
    double spread = 0;
};

PowerResult power_iterate(const TransferMatrix& M, bool transpose, const SpectralOptions& opt) {
    const std::size_t n = M.rows();
    PowerResult r;
    r.v.assign(n, 1.0);
    std::vector<double> w(n);
    for (int it = 1; it <= opt.max_iter; ++it) {
        if (transpose)
            M.multiply_transpose(r.v, w);
        else
            M.multiply(r.v, w);
        double rmin = std::numeric_limits<double>::infinity(), rmax = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (r.v[i] <= 0 || w[i] <= 0) {
                rmin = 0;
                break;
            }
            double q = w[i] / r.v[i];
            rmin = std::min(rmin, q);
            rmax = std::max(rmax, q);
        }
        double lam = 0.5 * (rmin + rmax);
        double norm = *std::max_element(w.begin(), w.end());
        if (norm <= 0) throw AssumptionViolation("solve_spectral: iterate vanished (reducible input)");
        for (double& x : w) x /= norm;
        r.v.swap(w);
        r.lambda = lam;
        r.iterations = it;
        r.spread = (rmax - rmin) / std::max(lam, 1e-300);
        if (rmin > 0 && r.spread <= opt.tol) return r;
    }
    throw BudgetExceeded("solve_spectral: power iteration did not converge within max_iter");
}

}  // namespace

SpectralData solve_spectral(const TransferMatrix& M, const SpectralOptions& opt) {
    const std::size_t n = M.rows();
    PowerResult right = power_iterate(M, false, opt);
    PowerResult left = power_iterate(M, true, opt);

    SpectralData out;
    out.index = M.index_ptr();
    out.const_shift = M.const_shift();
    out.lambda0 = right.lambda;
    out.iterations_right = right.iterations;
    out.iterations_left = left.iterations;
    out.lambda_gap = std::abs(right.lambda - left.lambda) / right.lambda;

    double umin = *std::min_element(right.v.begin(), right.v.end());
    if (!(umin > 0))
        throw AssumptionViolation("solve_spectral: non-positive eigenvector (reducible subsystem?)");

    // m as a probability vector; then u scaled so <m, u> = 1.
    double msum = std::accumulate(left.v.begin(), left.v.end(), 0.0);
    for (double& x : left.v) x /= msum;
    double mu = 0;
    for (std::size_t i = 0; i < n; ++i) mu += left.v[i] * right.v[i];
    out.pre_normalization_mass = mu;
    for (double& x : right.v) x /= mu;

    // Residuals at the normalized vectors.
    std::vector<double> tmp;
    M.multiply(right.v, tmp);
    double rres = 0, unorm = 0;
    for (std::size_t i = 0; i < n; ++i) {
        rres = std::max(rres, std::abs(tmp[i] - right.lambda * right.v[i]));
        unorm = std::max(unorm, std::abs(right.v[i]));
    }
    out.resid_right = rres / (right.lambda * unorm);
    M.multiply_transpose(left.v, tmp);
    double lres = 0;
    for (std::size_t i = 0; i < n; ++i) lres += std::abs(tmp[i] - right.lambda * left.v[i]);
    out.resid_left = lres / right.lambda;

    out.u = SplitFunction{M.index_ptr(), std::move(right.v)};
    out.m = TileMeasure{M.index_ptr(), std::move(left.v), true};

    TransitivityReport t = transitivity_report(M.index().sub());
    out.primitivity_warning = !t.mixing;
    return out;
}

SpectralData solve_spectral(const Subsystem& sub, const Potential& phi, int depth,
                            const SpectralOptions& opt) {
    auto index = std::make_shared<TileIndex>(sub, depth);
    TransferMatrix M(index, phi);
    return solve_spectral(M, opt);
}

// ---------------------------------------------------------------------
// Exact branch sums
// ---------------------------------------------------------------------

double apply_split_operator(const Subsystem& sub, const Potential& phi, const PointFunction& v,
                            const SplitPoint& q, int n, bool strict, std::size_t node_budget) {
    sub.require_surjective("apply_split_operator");
    if (n < 0) throw ConfigError("apply_split_operator: n must be >= 0");
    if (strict && on_boundary(q))
        throw AssumptionViolation("apply_split_operator: basepoint on the glued curve (strict mode)");
    if (n == 0) return v(FixedPoint::from_split(q));
    check_walk_budget(sub, q.face, n, node_budget, "apply_split_operator");

    struct State {
        double acc = 0;
    };
    std::vector<State> states;
    detail::walk_preimages<State, detail::NoAux>(
        sub, q, n, &phi, {}, [](const FixedPoint&, detail::NoAux a, int, int) { return a; },
        [&](int depth, const FixedPoint& p, double phi_sum, detail::NoAux, State& st) {
            if (depth == n) st.acc += v(p) * std::exp(phi_sum);
        },
        states);
    std::vector<double> parts;
    parts.reserve(states.size());
    for (const State& s : states) parts.push_back(s.acc);
    return pairwise_sum(parts);
}

double apply_split_operator(const Subsystem& sub, const Potential& phi, const SplitFunction& v,
                            const SplitPoint& q, int n, bool strict, std::size_t node_budget) {
    return apply_split_operator(
        sub, phi, [&](const FixedPoint& p) { return v.values[v.index->locate(p.to_split())]; }, q,
        n, strict, node_budget);
}

namespace {

// All table rows in one walk: every depth-j node contributes exp(S_j phi).
std::vector<double> operator_row_sums(const Subsystem& sub, const Potential& phi,
                                      const SplitPoint& q, int n_max) {
    struct State {
        std::vector<double> rows;
    };
    std::vector<State> states;
    detail::walk_preimages<State, detail::NoAux>(
        sub, q, n_max, &phi, {}, [](const FixedPoint&, detail::NoAux a, int, int) { return a; },
        [&](int depth, const FixedPoint&, double phi_sum, detail::NoAux, State& st) {
            if (st.rows.empty()) st.rows.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
            st.rows[static_cast<std::size_t>(depth)] += std::exp(phi_sum);
        },
        states);
    std::vector<double> rows(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (std::size_t j = 1; j < rows.size(); ++j) {
        std::vector<double> parts;
        for (const auto& st : states)
            if (!st.rows.empty()) parts.push_back(st.rows[j]);
        rows[j] = pairwise_sum(parts);
    }
    return rows;
}

double error_bar_slack(const Subsystem& sub, const Potential& phi, int n) {
    if (phi.is_constant()) return 0.0;
    HolderData h = phi.holder_data();
    double c1 = c1_constant(sub, phi);
    return c1 * std::pow(std::sqrt(2.0), h.alpha) / n;
}

}  // namespace

std::vector<PressureRow> pressure_via_operator(const Subsystem& sub, const Potential& phi,
                                               const SplitPoint& q, int n_max,
                                               std::size_t node_budget) {
    sub.require_surjective("pressure_via_operator");
    if (n_max < 1) throw ConfigError("pressure_via_operator: n_max must be >= 1");
    std::vector<PressureRow> table;
    if (phi.is_constant()) {
        const double c = phi.constant_part();
        TileMatrix A = tile_matrix(sub);
        TileMatrix P = TileMatrix::identity();
        for (int j = 1; j <= n_max; ++j) {
            P = P * A;
            double cnt = static_cast<double>(P.colour_count(q.face));
            PressureRow row;
            row.n = j;
            row.value = c + std::log(cnt) / j;
            row.white = row.black = row.total = row.value;
            row.error_bar = 0;
            table.push_back(row);
        }
        return table;
    }
    check_walk_budget(sub, q.face, n_max, node_budget, "pressure_via_operator");
    std::vector<double> rows = operator_row_sums(sub, phi, q, n_max);
    for (int j = 1; j <= n_max; ++j) {
        PressureRow row;
        row.n = j;
        row.value = std::log(rows[static_cast<std::size_t>(j)]) / j;
        row.white = row.black = row.total = row.value;
        row.error_bar = error_bar_slack(sub, phi, j);
        table.push_back(row);
    }
    return table;
}

std::vector<PressureRow> pressure_via_tiles(const Subsystem& sub, const Potential& phi, int n_max,
                                            std::size_t node_budget) {
    sub.require_surjective("pressure_via_tiles");
    if (n_max < 1) throw ConfigError("pressure_via_tiles: n_max must be >= 1");
    std::vector<PressureRow> table;
    if (phi.is_constant()) {
        const double c = phi.constant_part();
        TileMatrix A = tile_matrix(sub);
        TileMatrix P = TileMatrix::identity();
        for (int j = 1; j <= n_max; ++j) {
            P = P * A;
            double w = static_cast<double>(P.colour_count(Colour::White));
            double b = static_cast<double>(P.colour_count(Colour::Black));
            PressureRow row;
            row.n = j;
            row.white = c + std::log(w) / j;
            row.black = c + std::log(b) / j;
            row.value = std::max(row.white, row.black);
            row.total = c + std::log(w + b) / j;
            row.error_bar = 0;
            table.push_back(row);
        }
        return table;
    }
    // Z_n per colour class equals L^n 1 at that face's centre: tile
    // representatives are exactly the branch preimages of the centres.
    check_walk_budget(sub, Colour::White, n_max, node_budget / 2, "pressure_via_tiles");
    check_walk_budget(sub, Colour::Black, n_max, node_budget / 2, "pressure_via_tiles");
    SplitPoint cw(Colour::White, Rat(1, 2), Rat(1, 2));
    SplitPoint cb(Colour::Black, Rat(1, 2), Rat(1, 2));
    std::vector<double> zw = operator_row_sums(sub, phi, cw, n_max);
    std::vector<double> zb = operator_row_sums(sub, phi, cb, n_max);
    for (int j = 1; j <= n_max; ++j) {
        PressureRow row;
        row.n = j;
        row.white = std::log(zw[static_cast<std::size_t>(j)]) / j;
        row.black = std::log(zb[static_cast<std::size_t>(j)]) / j;
        row.value = std::max(row.white, row.black);
        row.total = std::log(zw[static_cast<std::size_t>(j)] + zb[static_cast<std::size_t>(j)]) / j;
        row.error_bar = error_bar_slack(sub, phi, j);
        table.push_back(row);
    }
    return table;
}

double normalized_apply(const Subsystem& sub, const Potential& phi, const SpectralData& spectral,
                        const PointFunction& v, const SplitPoint& q, int n,
                        std::size_t node_budget) {
    if (n < 0) throw ConfigError("normalized_apply: n must be >= 0");
    const TileIndex& ix = *spectral.index;
    double umin = *std::min_element(spectral.u.values.begin(), spectral.u.values.end());
    if (!(umin > 0)) throw AssumptionViolation("normalized_apply: eigenfunction not positive");
    const double uq = spectral.u.values[ix.locate(q)];
    if (n == 0) return v(FixedPoint::from_split(q));
    const double P = spectral.pressure();
    double lun = apply_split_operator(
        sub, phi,
        [&](const FixedPoint& p) { return v(p) * spectral.u.values[ix.locate(p.to_split())]; }, q,
        n, false, node_budget);
    return std::exp(-n * P) * lun / uq;
}

SplitFunction cesaro_eigenfunction(const Subsystem& sub, const Potential& phi,
                                   double pressure_estimate, int depth, int n_terms) {
    if (n_terms < 1) throw ConfigError("cesaro_eigenfunction: need at least one term");
    auto index = std::make_shared<TileIndex>(sub, depth);
    TransferMatrix M(index, phi);
    const double step = std::exp(M.const_shift() - pressure_estimate);
    std::vector<double> v(index->size(), 1.0), acc(index->size(), 0.0), tmp;
    for (int j = 0; j < n_terms; ++j) {
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
        if (j + 1 < n_terms) {
            M.multiply(v, tmp);
            for (double& x : tmp) x *= step;
            v.swap(tmp);
        }
    }
    for (double& x : acc) x /= n_terms;
    return SplitFunction{index, std::move(acc)};
}

DistortionConstants distortion_constants(const Subsystem& sub, const Potential& phi) {
    HolderData h = phi.holder_data();
    DistortionConstants dc;
    dc.alpha = h.alpha;
    dc.C0 = 1.0;  // branches are exact similarities in this model
    dc.C1 = c1_constant(sub, phi);

    // Irreducibility witness: least n with a colour-c n-tile in each 0-tile,
    // maximized over the pair; paths of length 1 or 2 decide it.
    TileMatrix A = tile_matrix(sub);
    int nf = 0;
    for (int p = 0; p < 2; ++p)
        for (int c = 0; c < 2; ++c) {
            if (A.m[p][c] > 0) {
                nf = std::max(nf, 1);
                continue;
            }
            bool two = (A.m[p][0] > 0 && A.m[0][c] > 0) || (A.m[p][1] > 0 && A.m[1][c] > 0);
            if (!two)
                throw AssumptionViolation("distortion_constants: subsystem is not irreducible");
            nf = std::max(nf, 2);
        }
    dc.n_irr = nf;
    const double deg = sub.map().degree();
    dc.Cbar = std::pow(deg, nf) *
              std::exp(2.0 * nf * h.M + dc.C1 * std::pow(std::sqrt(2.0), h.alpha));
    return dc;
}

DistortionReport verify_distortion(const Subsystem& sub, const Potential& phi, int n, int n_pairs,
                                   std::uint64_t seed, double pressure_estimate) {
    sub.require_surjective("verify_distortion");
    DistortionReport rep;
    rep.n = n;
    rep.pairs = n_pairs;
    rep.consts = distortion_constants(sub, phi);
    rep.worst_lower_margin = std::numeric_limits<double>::infinity();
    rep.worst_upper_margin = std::numeric_limits<double>::infinity();
    rep.worst_ratio_excess = -std::numeric_limits<double>::infinity();

    Rng rng(seed);
    const std::int64_t D = 104729;  // prime denominator keeps samples off all skeletons
    auto sample = [&](Colour face) {
        return SplitPoint(face, Rat(1 + static_cast<std::int64_t>(rng.below(D - 1)), D),
                          Rat(1 + static_cast<std::int64_t>(rng.below(D - 1)), D));
    };
    auto one = [](const FixedPoint&) { return 1.0; };

    for (int k = 0; k < n_pairs; ++k) {
        Colour face = (k % 2 == 0) ? Colour::White : Colour::Black;
        SplitPoint x = sample(face), y = sample(face);
        double lx = apply_split_operator(sub, phi, one, x, n);
        double ly = apply_split_operator(sub, phi, one, y, n);
        double d = pillow_distance(x, y);
        double bound = std::exp(rep.consts.C1 * std::pow(d, rep.consts.alpha));
        double ratio = std::max(lx / ly, ly / lx);
        rep.worst_ratio_excess = std::max(rep.worst_ratio_excess, ratio - bound);
        if (ratio > bound * (1 + 1e-12)) ++rep.ratio_violations;

        for (double val : {std::exp(-n * pressure_estimate) * lx,
                           std::exp(-n * pressure_estimate) * ly}) {
            rep.worst_lower_margin = std::min(rep.worst_lower_margin, val - 1.0 / rep.consts.Cbar);
            rep.worst_upper_margin = std::min(rep.worst_upper_margin, rep.consts.Cbar - val);
            if (val < 1.0 / rep.consts.Cbar * (1 - 1e-12) || val > rep.consts.Cbar * (1 + 1e-12))
                ++rep.range_violations;
        }
    }
    rep.all_within = rep.ratio_violations == 0 && rep.range_violations == 0;
    return rep;
}

}  // namespace subthurston

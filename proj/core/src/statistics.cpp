#include "subthurston/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subthurston/detail/walk.hpp"

namespace subthurston {

namespace {

BigInt preimage_nodes(const Subsystem& sub, Colour face, int n) {
    TileMatrix A = tile_matrix(sub);
    TileMatrix P = TileMatrix::identity();
    BigInt total = 0;
    for (int j = 1; j <= n; ++j) {
        P = P * A;
        total += P.colour_count(face);
    }
    return total;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double n = static_cast<double>(xs.size());
    if (n < 2) return 0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

double DiscreteMeasure::total() const {
    double s = 0;
    for (const auto& a : atoms) s += a.w;
    return s;
}

DiscreteMeasure preimage_measure(const Subsystem& sub, const Potential& phi, const SplitPoint& x,
                                 int n, PreimageMode mode, bool strict, std::size_t atom_budget) {
    sub.require_surjective("preimage_measure");
    if (n < 1) throw ConfigError("preimage_measure: n must be >= 1");
    if (strict && on_boundary(x))
        throw AssumptionViolation("preimage_measure: basepoint on the glued curve (strict mode)");
    TileMatrix P = tile_matrix_level(sub, n);
    BigInt leaves = P.colour_count(x.face);
    BigInt atoms = mode == PreimageMode::Point ? leaves : leaves * n;
    if (atoms > BigInt(atom_budget))
        throw BudgetExceeded("preimage_measure: atom count exceeds budget; "
                             "use weak_star_table for streaming integrals");

    struct State {
        std::vector<WeightedAtom> atoms;
        double z = 0;
    };
    struct Aux {
        // Path from the basepoint down to this node (orbit of the leaf).
        std::vector<FixedPoint> path;
    };
    std::vector<State> states;
    detail::walk_preimages<State, Aux>(
        sub, x, n, &phi, Aux{},
        [&](const FixedPoint& p, const Aux& parent, int, int) {
            Aux a = parent;
            a.path.push_back(p);
            return a;
        },
        [&](int depth, const FixedPoint& p, double phi_sum, const Aux& aux, State& st) {
            if (depth != n) return;
            double w = std::exp(phi_sum);
            st.z += w;
            if (mode == PreimageMode::Point) {
                st.atoms.push_back({p, w});
            } else {
                // Orbit y, F(y), ..., F^{n-1}(y): the path back to the root.
                for (auto it = aux.path.rbegin(); it != aux.path.rend(); ++it)
                    st.atoms.push_back({*it, w / n});
            }
        },
        states);

    DiscreteMeasure out;
    double z = 0;
    for (const State& st : states) z += st.z;
    for (State& st : states)
        for (auto& a : st.atoms) {
            a.w /= z;
            out.atoms.push_back(a);
        }
    out.normalized = true;
    return out;
}

WeakStarTable weak_star_table(const Subsystem& sub, const Potential& phi, const Potential& g,
                              PreimageMode mode, const SplitPoint& x, int n_min, int n_max,
                              double reference, std::size_t node_budget) {
    sub.require_surjective("weak_star_table");
    if (n_min < 1 || n_max < n_min) throw ConfigError("weak_star_table: bad n range");
    if (on_boundary(x))
        throw AssumptionViolation("weak_star_table: basepoint on the glued curve");
    if (preimage_nodes(sub, x.face, n_max) > BigInt(node_budget))
        throw BudgetExceeded("weak_star_table: branch tree exceeds node budget");

    struct State {
        std::vector<double> num, den;
    };
    std::vector<State> states;
    const std::size_t nrow = static_cast<std::size_t>(n_max) + 1;
    detail::walk_preimages<State, double>(
        sub, x, n_max, &phi, 0.0,
        [&](const FixedPoint& p, double parent, int, int) { return parent + g.eval(p); },
        [&](int depth, const FixedPoint& p, double phi_sum, double gsum, State& st) {
            if (st.num.empty()) {
                st.num.assign(nrow, 0.0);
                st.den.assign(nrow, 0.0);
            }
            double w = std::exp(phi_sum);
            double val = mode == PreimageMode::Point ? g.eval(p) : gsum / depth;
            st.num[static_cast<std::size_t>(depth)] += w * val;
            st.den[static_cast<std::size_t>(depth)] += w;
        },
        states);

    WeakStarTable table;
    table.reference = reference;
    std::vector<double> xs, ys;
    for (int n = n_min; n <= n_max; ++n) {
        std::vector<double> nums, dens;
        for (const State& st : states)
            if (!st.num.empty()) {
                nums.push_back(st.num[static_cast<std::size_t>(n)]);
                dens.push_back(st.den[static_cast<std::size_t>(n)]);
            }
        WeakStarRow row;
        row.n = n;
        row.integral = pairwise_sum(nums) / pairwise_sum(dens);
        row.gap = std::abs(row.integral - reference);
        table.rows.push_back(row);
        xs.push_back(n);
        ys.push_back(row.gap);
    }
    table.trend_slope = fit_slope(xs, ys);
    return table;
}

// ---------------------------------------------------------------------
// Markov chains on the tile shift
// ---------------------------------------------------------------------

MarkovMeasure make_markov(const Subsystem& sub, std::vector<std::vector<double>> Q) {
    const std::size_t m = static_cast<std::size_t>(sub.tile_count());
    if (Q.size() != m) throw ConfigError("make_markov: row count mismatch");
    for (std::size_t i = 0; i < m; ++i) {
        if (Q[i].size() != m) throw ConfigError("make_markov: column count mismatch");
        double row = 0;
        const Colour ci = sub.tile(static_cast<int>(i)).colour;
        for (std::size_t j = 0; j < m; ++j) {
            if (Q[i][j] < 0) throw ConfigError("make_markov: negative transition weight");
            if (Q[i][j] > 0 && sub.tile(static_cast<int>(j)).position != ci)
                throw ConfigError("make_markov: transition off the admissible edge set");
            row += Q[i][j];
        }
        if (std::abs(row - 1.0) > 1e-12)
            throw ConfigError("make_markov: rows must be stochastic");
    }

    // Stationary distribution by Cesaro-averaged left iteration (handles
    // periodic supports).
    std::vector<double> pi(m, 1.0 / static_cast<double>(m)), next(m), avg(m);
    double gap = 0;
    for (int it = 0; it < 200000; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (Q[i][j] > 0) next[j] += pi[i] * Q[i][j];
        for (std::size_t j = 0; j < m; ++j) avg[j] = 0.5 * (pi[j] + next[j]);
        double norm = 0;
        for (double v : avg) norm += v;
        for (double& v : avg) v /= norm;
        gap = 0;
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (Q[i][j] > 0) next[j] += avg[i] * Q[i][j];
        for (std::size_t j = 0; j < m; ++j) gap += std::abs(next[j] - avg[j]);
        pi = avg;
        if (gap <= 1e-14) break;
    }
    MarkovMeasure mm;
    mm.Q = std::move(Q);
    mm.pi = std::move(pi);
    mm.stationarity_gap = gap;
    if (gap > 1e-12)
        throw AssumptionViolation("make_markov: stationary distribution did not converge");
    return mm;
}

MarkovMeasure uniform_chain(const Subsystem& sub) {
    const std::size_t m = static_cast<std::size_t>(sub.tile_count());
    std::vector<std::vector<double>> Q(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        const auto& succ = sub.continuations(sub.tile(static_cast<int>(i)).colour);
        if (succ.empty()) throw AssumptionViolation("uniform_chain: dead colour class");
        for (int j : succ) Q[i][static_cast<std::size_t>(j)] = 1.0 / static_cast<double>(succ.size());
    }
    return make_markov(sub, std::move(Q));
}

MarkovMeasure deterministic_chain(const Subsystem& sub) {
    const std::size_t m = static_cast<std::size_t>(sub.tile_count());
    std::vector<std::vector<double>> Q(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        const auto& succ = sub.continuations(sub.tile(static_cast<int>(i)).colour);
        if (succ.empty()) throw AssumptionViolation("deterministic_chain: dead colour class");
        Q[i][static_cast<std::size_t>(succ.front())] = 1.0;
    }
    return make_markov(sub, std::move(Q));
}

MarkovMeasure random_chain(const Subsystem& sub, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t m = static_cast<std::size_t>(sub.tile_count());
    std::vector<std::vector<double>> Q(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        const auto& succ = sub.continuations(sub.tile(static_cast<int>(i)).colour);
        if (succ.empty()) throw AssumptionViolation("random_chain: dead colour class");
        double total = 0;
        for (int j : succ) {
            double w = 0.05 + rng.unit();
            Q[i][static_cast<std::size_t>(j)] = w;
            total += w;
        }
        for (int j : succ) Q[i][static_cast<std::size_t>(j)] /= total;
    }
    return make_markov(sub, std::move(Q));
}

double markov_entropy(const MarkovMeasure& mm) {
    double h = 0;
    for (std::size_t i = 0; i < mm.pi.size(); ++i)
        for (std::size_t j = 0; j < mm.pi.size(); ++j)
            if (mm.Q[i][j] > 0) h -= mm.pi[i] * mm.Q[i][j] * std::log(mm.Q[i][j]);
    return h;
}

MarkovIntegral markov_integral(const Subsystem& sub, const MarkovMeasure& mm, const Potential& phi,
                               int depth) {
    TileIndex ix(sub, depth);
    MarkovIntegral out;
    double acc = 0;
    for (std::size_t i = 0; i < ix.size(); ++i) {
        const std::int8_t* w = ix.word(i);
        double prob = mm.pi[static_cast<std::size_t>(w[0])];
        for (int k = 1; k < depth && prob > 0; ++k)
            prob *= mm.Q[static_cast<std::size_t>(w[k - 1])][static_cast<std::size_t>(w[k])];
        if (prob > 0) acc += prob * phi.eval(ix.center(i));
    }
    out.value = acc;
    if (!phi.is_constant()) {
        HolderData h = phi.holder_data();
        out.quadrature_error = h.H * std::pow(tile_diameter(sub.map(), depth), h.alpha);
    }
    return out;
}

RateReport rate_function(const Subsystem& sub, const Potential& phi, double pressure,
                         const MarkovMeasure& mm, int depth) {
    RateReport rep;
    rep.pressure = pressure;
    rep.entropy = markov_entropy(mm);
    MarkovIntegral mi = markov_integral(sub, mm, phi, depth);
    rep.phi_integral = mi.value;
    rep.quadrature_error = mi.quadrature_error;
    rep.I = pressure - rep.entropy - rep.phi_integral;
    return rep;
}

// ---------------------------------------------------------------------
// Moment-generating characterization of pressure
// ---------------------------------------------------------------------

MgfReport mgf_pressure_check(const Subsystem& sub, const Potential& phi, const Potential& psi,
                             int n_max, int depth, const SpectralOptions& opt,
                             std::size_t node_budget) {
    sub.require_surjective("mgf_pressure_check");
    if (n_max < 1) throw ConfigError("mgf_pressure_check: n_max must be >= 1");

    SpectralData base = solve_spectral(sub, phi, depth, opt);
    SpectralData shifted = solve_spectral(sub, phi + psi, depth, opt);
    EquilibriumState mu = equilibrium_state(base);

    MgfReport rep;
    rep.pressure_phi = base.pressure();
    rep.pressure_phi_psi = shifted.pressure();
    rep.target = rep.pressure_phi_psi - rep.pressure_phi;

    const TileIndex& ix = *base.index;
    const int k = ix.depth();
    std::vector<double> lhs(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::vector<double> mass(static_cast<std::size_t>(n_max) + 1, 0.0);

    // Levels up to the grid depth: exact aggregation of mu plus the suffix
    // recursion for S_n psi at tile centres.
    {
        std::shared_ptr<TileIndex> prev;
        std::vector<double> prev_sums;
        for (int d = 1; d <= std::min(n_max, k); ++d) {
            auto ixd = std::make_shared<TileIndex>(sub, d);
            std::vector<double> sums(ixd->size());
            for (std::size_t i = 0; i < ixd->size(); ++i) {
                double v = psi.eval(ixd->center(i));
                if (d > 1) v += prev_sums[prev->lookup(ixd->radix(i) % ixd->radix_msb())];
                sums[i] = v;
            }
            TileMeasure mu_d = coarse_grain(mu.mu, ixd);
            double acc = 0, tot = 0;
            for (std::size_t i = 0; i < ixd->size(); ++i) {
                acc += mu_d.weights[i] * std::exp(sums[i]);
                tot += mu_d.weights[i];
            }
            lhs[static_cast<std::size_t>(d)] = acc / tot;
            mass[static_cast<std::size_t>(d)] = tot;
            prev = std::move(ixd);
            prev_sums = std::move(sums);
        }
    }

    // Deeper levels: stream over depth-n words, refining mu on the fly:
    // mu_n(w) = u(prefix_k) lambda^{-(n-k)} e^{S_{n-k} phi(centre)} m(suffix_k).
    if (n_max > k) {
        if (preimage_nodes(sub, Colour::White, n_max) + preimage_nodes(sub, Colour::Black, n_max) >
            BigInt(node_budget))
            throw BudgetExceeded("mgf_pressure_check: branch tree exceeds node budget");

        Potential phi0 = phi.centered();
        const double log_lambda0 = std::log(base.lambda0);
        const std::uint64_t nbase = ix.radix_base();
        std::uint64_t span = 1;
        bool dense_ok = true;
        for (int d = 0; d < k; ++d) {
            if (span > 200'000'000ull / nbase) {
                dense_ok = false;
                break;
            }
            span *= nbase;
        }
        std::vector<std::int32_t> dense;
        if (dense_ok) {
            dense.assign(span, -1);
            for (std::size_t i = 0; i < ix.size(); ++i)
                dense[ix.radix(i)] = static_cast<std::int32_t>(i);
        }
        auto cyl = [&](std::uint64_t radix) -> std::size_t {
            if (dense_ok) {
                std::int32_t i = dense[radix];
                if (i < 0) throw AssumptionViolation("mgf: cylinder not in domain");
                return static_cast<std::size_t>(i);
            }
            return ix.lookup(radix);
        };

        struct Aux {
            double phi0_tail = 0;   // S_{depth-k} phi0 at the centre, depths > k
            double m_val = 0;       // m on the word's length-k suffix
            std::uint64_t front = 0;  // radix of the last k chosen symbols
        };
        struct State {
            std::vector<double> lhs, mass;
        };
        const std::uint64_t msb = ix.radix_msb();

        for (Colour c : {Colour::White, Colour::Black}) {
            SplitPoint centre(c, Rat(1, 2), Rat(1, 2));
            std::vector<State> states;
            detail::walk_preimages<State, Aux>(
                sub, centre, n_max, &psi, Aux{},
                [&](const FixedPoint& p, const Aux& parent, int d, int sym) {
                    Aux a;
                    a.front = static_cast<std::uint64_t>(sym) * msb + parent.front / nbase;
                    a.phi0_tail = parent.phi0_tail + (d > k ? phi0.eval(p) : 0.0);
                    a.m_val = d == k ? base.m.weights[cyl(a.front)] : parent.m_val;
                    return a;
                },
                [&](int d, const FixedPoint&, double psi_sum, const Aux& a, State& st) {
                    if (d <= k) return;
                    if (st.lhs.empty()) {
                        st.lhs.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
                        st.mass.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
                    }
                    double u = base.u.values[cyl(a.front)];
                    double mu_w =
                        u * a.m_val * std::exp(a.phi0_tail - (d - k) * log_lambda0);
                    st.lhs[static_cast<std::size_t>(d)] += mu_w * std::exp(psi_sum);
                    st.mass[static_cast<std::size_t>(d)] += mu_w;
                },
                states);
            for (int d = k + 1; d <= n_max; ++d) {
                std::vector<double> ls, ms;
                for (const State& st : states)
                    if (!st.lhs.empty()) {
                        ls.push_back(st.lhs[static_cast<std::size_t>(d)]);
                        ms.push_back(st.mass[static_cast<std::size_t>(d)]);
                    }
                lhs[static_cast<std::size_t>(d)] += pairwise_sum(ls);
                mass[static_cast<std::size_t>(d)] += pairwise_sum(ms);
            }
        }
        for (int d = k + 1; d <= n_max; ++d) {
            lhs[static_cast<std::size_t>(d)] /= mass[static_cast<std::size_t>(d)];
            rep.mass_drift =
                std::max(rep.mass_drift, std::abs(mass[static_cast<std::size_t>(d)] - 1.0));
        }
    }

    for (int n = 1; n <= n_max; ++n) {
        MgfRow row;
        row.n = n;
        row.lhs = std::log(lhs[static_cast<std::size_t>(n)]) / n;
        row.gap = std::abs(row.lhs - rep.target);
        rep.rows.push_back(row);
    }
    return rep;
}

std::vector<LdpRow> ldp_empirical(const Subsystem& sub, const Potential& phi, const Potential& g,
                                  double a, double r, const std::vector<int>& n_list,
                                  const SplitPoint& x, std::size_t node_budget) {
    sub.require_surjective("ldp_empirical");
    if (n_list.empty()) throw ConfigError("ldp_empirical: empty n list");
    if (on_boundary(x)) throw AssumptionViolation("ldp_empirical: basepoint on the glued curve");
    int n_max = *std::max_element(n_list.begin(), n_list.end());
    if (preimage_nodes(sub, x.face, n_max) > BigInt(node_budget))
        throw BudgetExceeded("ldp_empirical: branch tree exceeds node budget");

    struct State {
        std::vector<double> num, den;
    };
    std::vector<State> states;
    detail::walk_preimages<State, double>(
        sub, x, n_max, &phi, 0.0,
        [&](const FixedPoint& p, double parent, int, int) { return parent + g.eval(p); },
        [&](int depth, const FixedPoint&, double phi_sum, double gsum, State& st) {
            if (st.num.empty()) {
                st.num.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
                st.den.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
            }
            double w = std::exp(phi_sum);
            st.den[static_cast<std::size_t>(depth)] += w;
            if (std::abs(gsum / depth - a) < r) st.num[static_cast<std::size_t>(depth)] += w;
        },
        states);

    std::vector<LdpRow> rows;
    for (int n : n_list) {
        std::vector<double> nums, dens;
        for (const State& st : states)
            if (!st.num.empty()) {
                nums.push_back(st.num[static_cast<std::size_t>(n)]);
                dens.push_back(st.den[static_cast<std::size_t>(n)]);
            }
        LdpRow row;
        row.n = n;
        row.mass = pairwise_sum(nums) / pairwise_sum(dens);
        row.log_rate =
            row.mass > 0 ? std::log(row.mass) / n : -std::numeric_limits<double>::infinity();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace subthurston

#include "subthurston/equilibrium.hpp"

#include <algorithm>
#include <cmath>

namespace subthurston {

EquilibriumState equilibrium_state(const SpectralData& spectral) {
    const std::size_t n = spectral.index->size();
    std::vector<double> w(n);
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = spectral.u.values[i] * spectral.m.weights[i];
        if (w[i] < 0) throw AssumptionViolation("equilibrium_state: negative weight");
        total += w[i];
    }
    if (total <= 0) throw AssumptionViolation("equilibrium_state: zero total mass");
    EquilibriumState st;
    st.index = spectral.index;
    st.pre_normalization_mass = total;
    st.pressure = spectral.pressure();
    for (double& x : w) x /= total;
    st.mu = TileMeasure{spectral.index, std::move(w), true};
    return st;
}

TileMeasure coarse_grain(const TileMeasure& m, std::shared_ptr<const TileIndex> to_index) {
    const TileIndex& from = *m.index;
    const TileIndex& to = *to_index;
    if (to.depth() > from.depth())
        throw ConfigError("coarse_grain: target depth exceeds source depth");
    std::uint64_t div = 1;
    for (int k = 0; k < from.depth() - to.depth(); ++k) div *= from.radix_base();
    std::vector<double> w(to.size(), 0.0);
    for (std::size_t i = 0; i < from.size(); ++i)
        w[to.lookup(from.radix(i) / div)] += m.weights[i];
    return TileMeasure{std::move(to_index), std::move(w), m.probability};
}

RefineResult refine_measure(const Subsystem& sub, const Potential& phi,
                            const SpectralData& spectral, const TileMeasure& m, int to_depth,
                            std::size_t budget) {
    if (to_depth < m.index->depth())
        throw ConfigError("refine_measure: target depth below the measure's depth");
    Potential phi0 = phi.centered();
    RefineResult out;
    out.m = m;
    double drift = 0;
    while (out.m.index->depth() < to_depth) {
        const TileIndex& from = *out.m.index;
        auto deeper = std::make_shared<TileIndex>(sub, from.depth() + 1, budget);
        // Flow weight of a child word: exp(phi(centre)) times the measure
        // of the image word (leading symbol dropped). Each parent's mass is
        // then split among its children in proportion; the per-parent
        // totals would be lambda * m(parent) for an exact eigenvector, and
        // their relative defect is reported as mass_drift.
        std::vector<double> flow(deeper->size());
        std::vector<double> parent_total(from.size(), 0.0);
        std::vector<std::size_t> parent_of(deeper->size());
        for (std::size_t i = 0; i < deeper->size(); ++i) {
            std::size_t parent = from.lookup(deeper->radix(i) / deeper->radix_base());
            std::size_t image = from.lookup(deeper->radix(i) % deeper->radix_msb());
            flow[i] = std::exp(phi0.eval(deeper->center(i))) * out.m.weights[image];
            parent_of[i] = parent;
            parent_total[parent] += flow[i];
        }
        std::vector<double> w(deeper->size());
        for (std::size_t i = 0; i < deeper->size(); ++i) {
            double tot = parent_total[parent_of[i]];
            w[i] = tot > 0 ? out.m.weights[parent_of[i]] * flow[i] / tot : 0.0;
        }
        for (std::size_t t = 0; t < from.size(); ++t)
            if (out.m.weights[t] > 0)
                drift = std::max(drift, std::abs(parent_total[t] /
                                                     (spectral.lambda0 * out.m.weights[t]) -
                                                 1.0));
        out.m = TileMeasure{deeper, std::move(w), m.probability};
    }
    out.mass_drift = drift;
    return out;
}

namespace {

// Birkhoff sums of phi at the centres of every tile of each depth <= n,
// via the suffix recursion S_j(w) = phi(centre w) + S_{j-1}(suffix w).
struct CenterSums {
    std::vector<std::shared_ptr<TileIndex>> index;  // [depth-1]
    std::vector<std::vector<double>> sums;

    CenterSums(const Subsystem& sub, const Potential& phi, int n_levels, std::size_t budget) {
        index.reserve(static_cast<std::size_t>(n_levels));
        sums.reserve(static_cast<std::size_t>(n_levels));
        for (int d = 1; d <= n_levels; ++d) {
            auto ix = std::make_shared<TileIndex>(sub, d, budget);
            std::vector<double> s(ix->size());
            for (std::size_t i = 0; i < ix->size(); ++i) {
                double val = phi.eval(ix->center(i));
                if (d > 1) {
                    std::size_t suffix =
                        index.back()->lookup(ix->radix(i) % ix->radix_msb());
                    val += sums.back()[suffix];
                }
                s[i] = val;
            }
            index.push_back(std::move(ix));
            sums.push_back(std::move(s));
        }
    }
};

}  // namespace

GibbsReport gibbs_check(const Subsystem& sub, const Potential& phi, const EquilibriumState& state,
                        double pressure, int n_levels) {
    if (n_levels < 1) throw ConfigError("gibbs_check: need at least one level");
    if (n_levels > state.index->depth())
        throw ConfigError("gibbs_check: levels beyond the state's depth; refine the state first");

    GibbsReport rep;
    DistortionConstants dc = distortion_constants(sub, phi);
    // mu = u m with u in [1/Cbar, Cbar] and the eigenmeasure two-sided
    // Gibbs bound contributes another Cbar e^{C1 diam^alpha}; conservative.
    rep.constant = dc.Cbar * dc.Cbar *
                   std::exp(2.0 * dc.C1 * std::pow(std::sqrt(2.0), dc.alpha));

    CenterSums cs(sub, phi, n_levels, 8'000'000);
    std::vector<double> mids;
    for (int d = 1; d <= n_levels; ++d) {
        const TileIndex& ix = *cs.index[static_cast<std::size_t>(d) - 1];
        TileMeasure mu_d = coarse_grain(state.mu, cs.index[static_cast<std::size_t>(d) - 1]);
        GibbsLevel lv;
        lv.n = d;
        lv.min_ratio = std::numeric_limits<double>::infinity();
        lv.max_ratio = 0;
        for (std::size_t i = 0; i < ix.size(); ++i) {
            double gibbs = std::exp(cs.sums[static_cast<std::size_t>(d) - 1][i] - d * pressure);
            double ratio = mu_d.weights[i] / gibbs;
            lv.min_ratio = std::min(lv.min_ratio, ratio);
            lv.max_ratio = std::max(lv.max_ratio, ratio);
        }
        if (lv.min_ratio < 1.0 / rep.constant || lv.max_ratio > rep.constant)
            rep.within_bound = false;
        rep.max_over_min = std::max(rep.max_over_min, lv.max_ratio / lv.min_ratio);
        mids.push_back(0.5 * (std::log(lv.max_ratio) + std::log(lv.min_ratio)));
        rep.levels.push_back(lv);
    }
    // Least-squares slope of the centred log ratios against the level.
    if (mids.size() >= 2) {
        double n = static_cast<double>(mids.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t k = 0; k < mids.size(); ++k) {
            double x = static_cast<double>(k + 1);
            sx += x;
            sy += mids[k];
            sxx += x * x;
            sxy += x * mids[k];
        }
        rep.mid_log_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return rep;
}

InvarianceReport invariance_defect(const Subsystem& sub, const TileMeasure& mu) {
    const TileIndex& ix = *mu.index;
    if (ix.depth() < 2) throw ConfigError("invariance_defect: depth must be >= 2");
    auto coarse_ix = std::make_shared<TileIndex>(sub, ix.depth() - 1);

    // mu(F^{-1} T): group depth-k mass by the image tile (drop the leading
    // symbol); mu(T): group by the prefix.
    std::vector<double> pullback(coarse_ix->size(), 0.0), direct(coarse_ix->size(), 0.0);
    for (std::size_t i = 0; i < ix.size(); ++i) {
        pullback[coarse_ix->lookup(ix.radix(i) % ix.radix_msb())] += mu.weights[i];
        direct[coarse_ix->lookup(ix.radix(i) / ix.radix_base())] += mu.weights[i];
    }
    InvarianceReport rep;
    rep.depth = ix.depth();
    for (std::size_t t = 0; t < coarse_ix->size(); ++t)
        rep.max_defect = std::max(rep.max_defect, std::abs(pullback[t] - direct[t]));
    return rep;
}

InvarianceReport invariance_check(const Subsystem& sub, const EquilibriumState& state) {
    return invariance_defect(sub, state.mu);
}

InvarianceReport invariance_check(const Subsystem& sub, const EquilibriumState& state, int level) {
    if (level < 2 || level > state.index->depth())
        throw ConfigError("invariance_check: level must be in [2, depth]");
    if (level == state.index->depth()) return invariance_defect(sub, state.mu);
    auto ix = std::make_shared<TileIndex>(sub, level);
    return invariance_defect(sub, coarse_grain(state.mu, std::move(ix)));
}

EntropyEstimate entropy_estimate(const EquilibriumState& state, const Potential& phi,
                                 double pressure) {
    const TileIndex& ix = *state.index;
    EntropyEstimate est;
    double integral = 0;
    for (std::size_t i = 0; i < ix.size(); ++i)
        integral += state.mu.weights[i] * phi.eval(ix.center(i));
    est.phi_integral = integral;
    est.entropy = pressure - integral;
    if (!phi.is_constant()) {
        HolderData h = phi.holder_data();
        est.quadrature_error =
            h.H * std::pow(tile_diameter(ix.map(), ix.depth()), h.alpha);
    }
    return est;
}

DerivativeReport pressure_derivative_check(const Subsystem& sub, const Potential& phi,
                                           const Potential& gamma, double eps, int depth,
                                           bool richardson, const SpectralOptions& opt) {
    if (eps <= 0) throw ConfigError("pressure_derivative_check: eps must be positive");
    DerivativeReport rep;
    rep.eps = eps;
    rep.depth = depth;
    rep.richardson = richardson;

    auto central = [&](double e) {
        SpectralData plus = solve_spectral(sub, phi + gamma * e, depth, opt);
        SpectralData minus = solve_spectral(sub, phi + gamma * (-e), depth, opt);
        return (plus.pressure() - minus.pressure()) / (2 * e);
    };
    rep.finite_diff = central(eps);
    if (richardson) {
        double half = central(eps / 2);
        rep.finite_diff = (4 * half - rep.finite_diff) / 3;
    }

    SpectralData base = solve_spectral(sub, phi, depth, opt);
    EquilibriumState mu = equilibrium_state(base);
    double integral = 0;
    for (std::size_t i = 0; i < mu.index->size(); ++i)
        integral += mu.mu.weights[i] * gamma.eval(mu.index->center(i));
    rep.integral = integral;
    rep.gap = std::abs(rep.finite_diff - rep.integral);
    return rep;
}

}  // namespace subthurston

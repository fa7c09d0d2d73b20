#pragma once

#include <memory>
#include <vector>

#include "subthurston/transfer.hpp"

namespace subthurston {

// The invariant Gibbs measure u*m on depth-k tiles.
struct EquilibriumState {
    std::shared_ptr<const TileIndex> index;
    TileMeasure mu;
    double pre_normalization_mass = 0;  // sum of u*m before rescaling
    double pressure = 0;
};

EquilibriumState equilibrium_state(const SpectralData& spectral);

// Aggregates a deeper measure onto the prefix tiles of `to_index`
// (to_index->depth() <= m.index->depth()). Exact regrouping.
TileMeasure coarse_grain(const TileMeasure& m, std::shared_ptr<const TileIndex> to_index);

struct RefineResult {
    TileMeasure m;
    // Relative gap between the pre-normalization mass flow and lambda^steps;
    // zero for an exact eigenvector.
    double mass_drift = 0;
};

// Extends an eigenmeasure-type tile measure to deeper tiles by the dual
// mass-flow rule m(U.w) = lambda^-1 exp(phi(centre)) m(w-suffix), then
// renormalizes. Coarse-graining the result recovers the input up to the
// solver residual.
RefineResult refine_measure(const Subsystem& sub, const Potential& phi,
                            const SpectralData& spectral, const TileMeasure& m, int to_depth,
                            std::size_t budget = 8'000'000);

struct GibbsLevel {
    int n = 0;
    double min_ratio = 0, max_ratio = 0;
};

struct GibbsReport {
    std::vector<GibbsLevel> levels;
    double constant = 0;        // conservative two-sided bound on the ratios
    bool within_bound = true;   // every ratio in [1/constant, constant]
    double mid_log_slope = 0;   // drift of the centred log ratios in n
    double max_over_min = 0;    // worst level spread
};

GibbsReport gibbs_check(const Subsystem& sub, const Potential& phi, const EquilibriumState& state,
                        double pressure, int n_levels);

struct InvarianceReport {
    double max_defect = 0;  // max |mu(F^-1 T) - mu(T)| over depth-(k-1) tiles
    int depth = 0;
};

InvarianceReport invariance_check(const Subsystem& sub, const EquilibriumState& state);
// Defect at a coarser granularity: the state is aggregated onto level
// tiles first (2 <= level <= state depth).
InvarianceReport invariance_check(const Subsystem& sub, const EquilibriumState& state, int level);
// Same defect for an arbitrary measure on the state's grid (negative controls).
InvarianceReport invariance_defect(const Subsystem& sub, const TileMeasure& mu);

struct EntropyEstimate {
    double entropy = 0;
    double phi_integral = 0;
    double quadrature_error = 0;  // Hoelder modulus at the tile scale
};

// h = P - int phi dmu with tile-centre quadrature.
EntropyEstimate entropy_estimate(const EquilibriumState& state, const Potential& phi,
                                 double pressure);

struct DerivativeReport {
    double finite_diff = 0;   // (P(phi + eps gamma) - P(phi - eps gamma)) / (2 eps)
    double integral = 0;      // int gamma d mu_phi
    double gap = 0;
    double eps = 0;
    int depth = 0;
    bool richardson = false;
};

DerivativeReport pressure_derivative_check(const Subsystem& sub, const Potential& phi,
                                           const Potential& gamma, double eps, int depth,
                                           bool richardson = false,
                                           const SpectralOptions& opt = {});

}  // namespace subthurston

#pragma once

#include <cstdint>
#include <vector>

#include "subthurston/equilibrium.hpp"
#include "subthurston/transfer.hpp"

namespace subthurston {

struct WeightedAtom {
    FixedPoint p;
    double w = 0;
};

struct DiscreteMeasure {
    std::vector<WeightedAtom> atoms;
    bool normalized = false;

    double total() const;
};

enum class PreimageMode { Point, Birkhoff };

// nu_n (Point) or nu-hat_n (Birkhoff): branch preimages of the basepoint
// weighted by exp(S_n phi), normalized; the Birkhoff variant spreads each
// weight over the forward orbit of the preimage.
DiscreteMeasure preimage_measure(const Subsystem& sub, const Potential& phi, const SplitPoint& x,
                                 int n, PreimageMode mode, bool strict = true,
                                 std::size_t atom_budget = 4'000'000);

struct WeakStarRow {
    int n = 0;
    double integral = 0;
    double gap = 0;
};

struct WeakStarTable {
    std::vector<WeakStarRow> rows;
    double reference = 0;
    double trend_slope = 0;  // least-squares slope of the gaps in n
};

// Streaming integrals of g against nu_n / nu-hat_n for n in [n_min, n_max],
// without materializing the measures.
WeakStarTable weak_star_table(const Subsystem& sub, const Potential& phi, const Potential& g,
                              PreimageMode mode, const SplitPoint& x, int n_min, int n_max,
                              double reference, std::size_t node_budget = 4'000'000'000ull);

// Stationary Markov chain on the selected 1-tiles; transitions live on the
// admissible edges position(next) = colour(current).
struct MarkovMeasure {
    std::vector<std::vector<double>> Q;  // dense rows over symbol ids
    std::vector<double> pi;              // stationary distribution
    double stationarity_gap = 0;         // ||pi Q - pi||_1 after solving
};

MarkovMeasure make_markov(const Subsystem& sub, std::vector<std::vector<double>> Q);
MarkovMeasure uniform_chain(const Subsystem& sub);
// Each state keeps only its first admissible successor.
MarkovMeasure deterministic_chain(const Subsystem& sub);
MarkovMeasure random_chain(const Subsystem& sub, std::uint64_t seed);

// Entropy of the stationary chain: -sum_i pi_i sum_j Q_ij log Q_ij.
double markov_entropy(const MarkovMeasure& mm);

struct MarkovIntegral {
    double value = 0;
    double quadrature_error = 0;
};

// int phi d(coded measure), by depth-d cylinder quadrature at tile centres.
MarkovIntegral markov_integral(const Subsystem& sub, const MarkovMeasure& mm, const Potential& phi,
                               int depth);

struct RateReport {
    double I = 0;  // P - h - int phi
    double pressure = 0;
    double entropy = 0;
    double phi_integral = 0;
    double quadrature_error = 0;
};

RateReport rate_function(const Subsystem& sub, const Potential& phi, double pressure,
                         const MarkovMeasure& mm, int depth);

struct MgfRow {
    int n = 0;
    double lhs = 0;  // (1/n) log int e^{S_n psi} d mu_phi
    double gap = 0;
};

struct MgfReport {
    std::vector<MgfRow> rows;
    double target = 0;  // P(phi + psi) - P(phi)
    double pressure_phi = 0;
    double pressure_phi_psi = 0;
    double mass_drift = 0;  // worst refined-measure mass defect
};

// Moment-generating characterization of pressure differences, with the
// integral computed against the depth-k equilibrium state refined on the
// fly to depth-n tiles.
MgfReport mgf_pressure_check(const Subsystem& sub, const Potential& phi, const Potential& psi,
                             int n_max, int depth, const SpectralOptions& opt = {},
                             std::size_t node_budget = 4'000'000'000ull);

struct LdpRow {
    int n = 0;
    double mass = 0;      // Omega_n weight of the Birkhoff-average event
    double log_rate = 0;  // (1/n) log mass; -inf when the event is missed
};

// Omega_n({ |(1/n) S_n g - a| < r }) over iterated preimages of x.
std::vector<LdpRow> ldp_empirical(const Subsystem& sub, const Potential& phi, const Potential& g,
                                  double a, double r, const std::vector<int>& n_list,
                                  const SplitPoint& x, std::size_t node_budget = 4'000'000'000ull);

}  // namespace subthurston

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "subthurston/combinatorics.hpp"
#include "subthurston/potential.hpp"

namespace subthurston {

// Index of the depth-k tiles of a subsystem, in lexicographic symbol
// order (which puts all white-position tiles first). Words are sequences
// of selected-tile ids; the radix encoding makes prefix/suffix lookups of
// neighbouring depths O(log N).
class TileIndex {
  public:
    TileIndex(Subsystem sub, int depth, std::size_t budget = 4'000'000);

    const Subsystem& sub() const { return sub_; }
    const PillowMap& map() const { return sub_.map(); }
    int depth() const { return depth_; }
    std::size_t size() const { return radix_.size(); }

    const std::int8_t* word(std::size_t i) const {
        return words_.data() + i * static_cast<std::size_t>(depth_);
    }
    int symbol(std::size_t i, int pos) const { return word(i)[pos]; }
    Colour face(std::size_t i) const { return sub_.tile(word(i)[0]).position; }
    Colour colour(std::size_t i) const {
        return sub_.tile(word(i)[depth_ - 1]).colour;
    }
    std::size_t white_count() const { return white_count_; }

    std::uint64_t radix(std::size_t i) const { return radix_[i]; }
    // Index of the word with the given radix value; throws if absent.
    std::size_t lookup(std::uint64_t r) const;
    // Index of truncate_k(U . w_i), the cylinder holding branch-U preimages
    // of points in cylinder i.
    std::size_t trunc_index(int symbol_id, std::size_t i) const {
        return lookup(static_cast<std::uint64_t>(symbol_id) * msb_ + radix_[i] / base_);
    }

    TileAddress address(std::size_t i) const;
    FixedPoint center(std::size_t i) const;

    // Index of the depth-k cylinder containing the point. The point must
    // lie in the subsystem's level-k domain; cylinder boundaries resolve
    // to the lowest containing cell.
    std::size_t locate(const SplitPoint& p) const;
    std::size_t locate(const FixedPoint& p) const { return locate(p.to_split()); }

    std::uint64_t radix_base() const { return base_; }
    std::uint64_t radix_msb() const { return msb_; }

  private:
    Subsystem sub_;
    int depth_;
    std::uint64_t base_;  // number of symbols
    std::uint64_t msb_;   // base^(depth-1)
    std::vector<std::int8_t> words_;
    std::vector<std::uint64_t> radix_;  // sorted (lexicographic == numeric)
    std::size_t white_count_ = 0;
};

// Real function on the split sphere, locally constant on depth-k tiles.
struct SplitFunction {
    std::shared_ptr<const TileIndex> index;
    std::vector<double> values;

    double value_at(const SplitPoint& p) const { return values[index->locate(p)]; }
    double sup_norm() const;
};

// Nonnegative weights on depth-k tiles.
struct TileMeasure {
    std::shared_ptr<const TileIndex> index;
    std::vector<double> weights;
    bool probability = false;

    double total() const;
    // Mass carried by each face.
    std::array<double, 2> face_mass() const;
};

// Locally constant discretization of the split Ruelle operator at depth k.
// Entries use the centered potential; the constant part is kept aside and
// folded back into eigenvalues exactly (so constant shifts scale spectra
// bit-for-bit).
class TransferMatrix {
  public:
    TransferMatrix(std::shared_ptr<const TileIndex> index, const Potential& phi);

    const TileIndex& index() const { return *index_; }
    std::shared_ptr<const TileIndex> index_ptr() const { return index_; }
    double const_shift() const { return const_shift_; }
    std::size_t rows() const { return rowptr_.size() - 1; }
    std::size_t nonzeros() const { return col_.size(); }

    void multiply(const std::vector<double>& in, std::vector<double>& out) const;
    void multiply_transpose(const std::vector<double>& in, std::vector<double>& out) const;

    double entry_sum_row(std::size_t r) const;

  private:
    std::shared_ptr<const TileIndex> index_;
    double const_shift_;
    std::vector<std::int64_t> rowptr_;
    std::vector<std::int32_t> col_;
    std::vector<double> val_;
    // transpose, for the left eigenvector iteration
    std::vector<std::int64_t> rowptr_t_;
    std::vector<std::int32_t> col_t_;
    std::vector<double> val_t_;
};

struct SpectralData {
    std::shared_ptr<const TileIndex> index;
    double lambda0 = 0;      // leading eigenvalue of the centered matrix
    double const_shift = 0;  // constant part of the potential
    SplitFunction u;         // right eigenvector, <m, u> = 1
    TileMeasure m;           // left eigenvector, probability
    double resid_right = 0, resid_left = 0;
    double lambda_gap = 0;  // |lambda_right - lambda_left| / lambda
    int iterations_right = 0, iterations_left = 0;
    double pre_normalization_mass = 0;  // <m, u> before the final scaling
    bool primitivity_warning = false;

    double lambda() const { return std::exp(const_shift) * lambda0; }
    double pressure() const { return const_shift + std::log(lambda0); }
};

struct SpectralOptions {
    double tol = 1e-10;
    int max_iter = 100000;
};

SpectralData solve_spectral(const TransferMatrix& M, const SpectralOptions& opt = {});
// Convenience: index + matrix + solve in one call.
SpectralData solve_spectral(const Subsystem& sub, const Potential& phi, int depth,
                            const SpectralOptions& opt = {});

// ---------------------------------------------------------------------
// Exact branch sums
// ---------------------------------------------------------------------

using PointFunction = std::function<double(const FixedPoint&)>;

// (L^n v)(q) by exact branch enumeration: the sum over colour-matching
// n-tiles of v at the branch preimage weighted by exp(S_n phi). n = 0
// returns v(q). strict rejects basepoints on the glued curve.
double apply_split_operator(const Subsystem& sub, const Potential& phi, const PointFunction& v,
                            const SplitPoint& q, int n, bool strict = true,
                            std::size_t node_budget = 600'000'000);
double apply_split_operator(const Subsystem& sub, const Potential& phi, const SplitFunction& v,
                            const SplitPoint& q, int n, bool strict = true,
                            std::size_t node_budget = 600'000'000);

struct PressureRow {
    int n = 0;
    double value = 0;      // (1/n) log of the dominant colour-class sum
    double white = 0;      // (1/n) log Z_n restricted to white-coloured tiles
    double black = 0;
    double total = 0;      // (1/n) log of the full tile sum (both colours)
    double error_bar = 0;  // distortion slack for the representative-point sums
};

// Partition-sum pressure table. Z_n is evaluated at tile centres; the
// error bar C1 * diam^alpha / n bounds the gap to the sup-based sums.
// Constant potentials use the exact counting route.
std::vector<PressureRow> pressure_via_tiles(const Subsystem& sub, const Potential& phi,
                                            int n_max, std::size_t node_budget = 600'000'000);

// Operator characterization (1/n) log (L^n 1)(q).
std::vector<PressureRow> pressure_via_operator(const Subsystem& sub, const Potential& phi,
                                               const SplitPoint& q, int n_max,
                                               std::size_t node_budget = 600'000'000);

// Normalized operator applied exactly: (1/u(q)) lambda^{-n} L^n(u v)(q)
// with u interpolated as a depth-k step function from `spectral`.
double normalized_apply(const Subsystem& sub, const Potential& phi, const SpectralData& spectral,
                        const PointFunction& v, const SplitPoint& q, int n,
                        std::size_t node_budget = 600'000'000);

// Cesaro average (1/n) sum_j e^{-jP} L^j 1 on the depth-k tile grid,
// using the depth-k discretization for the iterates.
SplitFunction cesaro_eigenfunction(const Subsystem& sub, const Potential& phi,
                                   double pressure_estimate, int depth, int n_terms);

struct DistortionConstants {
    double C0 = 1;   // metric comparison constant (exact for the grid model)
    double C1 = 0;   // Birkhoff-sum distortion constant
    double Cbar = 1; // two-sided branch-sum ratio constant
    int n_irr = 1;   // irreducibility witness entering Cbar
    double alpha = 1;
};

DistortionConstants distortion_constants(const Subsystem& sub, const Potential& phi);

struct DistortionReport {
    int n = 0;
    int pairs = 0;
    DistortionConstants consts;
    // Bound (i): same-face ratio of branch sums vs exp(C1 d^alpha).
    double worst_ratio_excess = 0;  // max over pairs of ratio - bound (<= 0 when clean)
    int ratio_violations = 0;
    // Bound (ii): C^-1 <= e^{-nP} L^n 1 <= C.
    double worst_lower_margin = 0;  // min over samples of value - Cbar^{-1}
    double worst_upper_margin = 0;  // min over samples of Cbar - value
    int range_violations = 0;
    bool all_within = true;
};

// Samples same-face pairs and checks the two distortion bounds against the
// computed constants. Violations are reported, not thrown.
DistortionReport verify_distortion(const Subsystem& sub, const Potential& phi, int n,
                                   int n_pairs, std::uint64_t seed, double pressure_estimate);

}  // namespace subthurston

#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "simplexconf/dirichlet.hpp"
#include "simplexconf/hdr.hpp"

namespace simplexconf {

// Disjoint index partition of a dataset.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> calibration;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
};

struct SplitFractions {
    double train = 0.7;
    double calibration = 0.3;
    double test = 0.0;
};

SplitIndices split_data(std::size_t n, SplitFractions fractions, std::uint64_t seed);

// k-th order statistic with k = ceil((1-alpha)(n_cal+1)); +infinity
// sentinel when k > n_cal (the region degenerates to the whole simplex).
struct ConformalQuantile {
    double value = 0.0;
    std::size_t k = 0;
    std::size_t n_cal = 0;
    double alpha = 0.0;

    bool is_infinite() const;
};

ConformalQuantile conformal_quantile(std::vector<double> scores, double alpha);

// Per-component closed intervals [lo_j, hi_j] within [0,1].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct BoxRegion {
    std::vector<Interval> intervals;
};

using PredictionRegion = std::variant<BoxRegion, FloorPolytope, LevelSetGrid>;

// Probability integral transforms under the fitted marginal Beta laws,
// clamped to [1e-12, 1 - 1e-12].
std::vector<double> pit_values(const CompositionalVector& y, const MeanPrecision& mp);

// Max-type quantile-residual score: max_j |Phi^-1(U_j)|.
double qr_score(const CompositionalVector& y, const MeanPrecision& mp);

// Inversion of the quantile-residual score into marginal Beta intervals.
BoxRegion qr_region(const MeanPrecision& mp, const ConformalQuantile& q);

bool region_contains(const PredictionRegion& region, const CompositionalVector& y);

// Per-component widths: interval lengths (box), the common marginal range
// 1 - sum(tau) (floor polytope), or the accepted-point spread (grid).
std::vector<double> region_widths(const PredictionRegion& region);

}  // namespace simplexconf

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "simplexconf/rng.hpp"

namespace simplexconf {

// Point on the open simplex: D positive parts summing to one.
class CompositionalVector {
  public:
    CompositionalVector() = default;
    explicit CompositionalVector(std::vector<double> parts);

    std::size_t dim() const { return parts_.size(); }
    double operator[](std::size_t j) const { return parts_[j]; }
    const std::vector<double>& parts() const { return parts_; }

  private:
    std::vector<double> parts_;
};

// Dirichlet shape parameters lambda_j > 0 with the cached total lambda0.
struct ShapeParams {
    std::vector<double> lambda;
    double lambda0 = 0.0;
};

ShapeParams make_shape_params(std::vector<double> lambda);

// Mean-precision parameterization: component means mu (summing to one) and
// precision phi > 0; lambda = phi * mu.
struct MeanPrecision {
    std::vector<double> mu;
    double phi = 0.0;

    std::size_t dim() const { return mu.size(); }
};

MeanPrecision make_mean_precision(std::vector<double> mu, double phi);

ShapeParams to_shape(const MeanPrecision& mp);
MeanPrecision to_mean_precision(const ShapeParams& sp);

// Log density of the Dirichlet in mean-precision form at an interior point.
// Throws DomainError for boundary y; call sites must clamp first.
double log_density(const CompositionalVector& y, const MeanPrecision& mp);

// (mean, variance) of component j: (mu_j, mu_j (1-mu_j) / (phi+1)).
std::pair<double, double> component_moments(const MeanPrecision& mp, std::size_t j);

// Marginal Beta(a, b) law of component j: a = phi mu_j, b = phi (1 - mu_j).
std::pair<double, double> marginal_beta(const MeanPrecision& mp, std::size_t j);

// Gamma-normalization draw; deterministic given the generator state.
CompositionalVector sample_dirichlet(const MeanPrecision& mp, Rng& rng);

}  // namespace simplexconf

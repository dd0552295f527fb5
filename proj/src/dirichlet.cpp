#include "simplexconf/dirichlet.hpp"

#include <cmath>
#include <cstdlib>

#include "simplexconf/errors.hpp"
#include "simplexconf/special_functions.hpp"

namespace simplexconf {

namespace {

constexpr double kSumTol = 1e-9;

double checked_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace

CompositionalVector::CompositionalVector(std::vector<double> parts)
    : parts_(std::move(parts)) {
    if (parts_.size() < 2) {
        throw DomainError("CompositionalVector: need at least two parts");
    }
    for (double p : parts_) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw DomainError("CompositionalVector: parts must be positive and finite");
        }
    }
    if (std::fabs(checked_sum(parts_) - 1.0) > kSumTol) {
        throw DomainError("CompositionalVector: parts must sum to one");
    }
}

ShapeParams make_shape_params(std::vector<double> lambda) {
    if (lambda.size() < 2) {
        throw DomainError("ShapeParams: need at least two components");
    }
    double total = 0.0;
    for (double l : lambda) {
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw DomainError("ShapeParams: shapes must be positive and finite");
        }
        total += l;
    }
    return ShapeParams{std::move(lambda), total};
}

MeanPrecision make_mean_precision(std::vector<double> mu, double phi) {
    if (mu.size() < 2) {
        throw DomainError("MeanPrecision: need at least two components");
    }
    for (double m : mu) {
        if (!(m > 0.0 && m < 1.0)) {
            throw DomainError("MeanPrecision: means must lie in (0,1)");
        }
    }
    if (std::fabs(checked_sum(mu) - 1.0) > kSumTol) {
        throw DomainError("MeanPrecision: means must sum to one");
    }
    if (!(phi > 0.0) || !std::isfinite(phi)) {
        throw DomainError("MeanPrecision: precision must be positive and finite");
    }
    return MeanPrecision{std::move(mu), phi};
}

ShapeParams to_shape(const MeanPrecision& mp) {
    std::vector<double> lambda(mp.mu.size());
    for (std::size_t j = 0; j < mp.mu.size(); ++j) lambda[j] = mp.phi * mp.mu[j];
    return ShapeParams{std::move(lambda), mp.phi};
}

MeanPrecision to_mean_precision(const ShapeParams& sp) {
    std::vector<double> mu(sp.lambda.size());
    for (std::size_t j = 0; j < sp.lambda.size(); ++j) mu[j] = sp.lambda[j] / sp.lambda0;
    return MeanPrecision{std::move(mu), sp.lambda0};
}

double log_density(const CompositionalVector& y, const MeanPrecision& mp) {
    const std::size_t d = mp.dim();
    if (y.dim() != d) {
        throw DomainError("log_density: dimension mismatch");
    }
    double out = log_gamma(mp.phi);
    for (std::size_t j = 0; j < d; ++j) {
        const double yj = y[j];
        if (!(yj > 0.0 && yj < 1.0)) {
            throw DomainError("log_density: point is not interior to the simplex");
        }
        const double lambda_j = mp.phi * mp.mu[j];
        out -= log_gamma(lambda_j);
        out += (lambda_j - 1.0) * std::log(yj);
    }
    return out;
}

std::pair<double, double> component_moments(const MeanPrecision& mp, std::size_t j) {
    if (j >= mp.dim()) {
        throw DomainError("component_moments: index out of range");
    }
    const double m = mp.mu[j];
    return {m, m * (1.0 - m) / (mp.phi + 1.0)};
}

std::pair<double, double> marginal_beta(const MeanPrecision& mp, std::size_t j) {
    if (j >= mp.dim()) {
        throw DomainError("marginal_beta: index out of range");
    }
    return {mp.phi * mp.mu[j], mp.phi * (1.0 - mp.mu[j])};
}

CompositionalVector sample_dirichlet(const MeanPrecision& mp, Rng& rng) {
    const std::size_t d = mp.dim();
    std::vector<double> parts(d);
    for (int attempt = 0; attempt < 100; ++attempt) {
        double total = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            parts[j] = rng.gamma(mp.phi * mp.mu[j]);
            total += parts[j];
        }
        bool interior = total > 0.0;
        for (std::size_t j = 0; j < d && interior; ++j) {
            interior = parts[j] / total > 0.0;
        }
        if (interior) {
            for (double& p : parts) p /= total;
            return CompositionalVector(parts);
        }
    }
    // Pathologically tiny shapes: clamp zero draws and renormalize.
    double total = 0.0;
    for (double& p : parts) {
        if (!(p > 0.0)) p = 1e-300;
        total += p;
    }
    for (double& p : parts) p /= total;
    return CompositionalVector(parts);
}

}  // namespace simplexconf

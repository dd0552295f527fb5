#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "simplexconf/dirichlet.hpp"

namespace simplexconf {

// One observation's covariates. Both blocks carry a leading intercept 1.
struct DesignRow {
    std::vector<double> mean_covariates;
    std::vector<double> precision_covariates;
};

// Regression coefficients. beta has one row per non-reference component
// (j = 2..D); component 1 is the reference with logits fixed at zero.
struct Coefficients {
    std::vector<std::vector<double>> beta;  // (D-1) x p
    std::vector<double> gamma;              // p_phi

    std::size_t n_components() const { return beta.size() + 1; }
    std::size_t n_mean_covariates() const { return beta.empty() ? 0 : beta.front().size(); }
    std::size_t n_parameters() const {
        return beta.size() * n_mean_covariates() + gamma.size();
    }
};

struct Observation {
    DesignRow x;
    CompositionalVector y;
};

using Dataset = std::vector<Observation>;

// Per-covariate affine transform applied at ingestion; entries with
// standardize=false pass through.
struct CovariateScaling {
    bool standardize = false;
    double mean = 0.0;
    double scale = 1.0;
};

struct Standardization {
    std::vector<CovariateScaling> mean_block;
    std::vector<CovariateScaling> precision_block;

    bool empty() const { return mean_block.empty() && precision_block.empty(); }
};

struct Convergence {
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0;
    double nll = 0.0;
};

struct FitConfig {
    int max_iterations = 500;
    double gradient_tol = 1e-6;
    double armijo_c = 1e-4;
};

struct FittedModel {
    Coefficients coefficients;
    std::size_t D = 0;
    Convergence convergence;
    std::optional<Standardization> standardization;

    // Expects a row in the same scale as the training design.
    MeanPrecision predict(const DesignRow& row) const;
    // Applies the stored standardization, then predicts.
    MeanPrecision predict_raw(const DesignRow& raw_row) const;
};

// eta_1 = 0, eta_j = <x, beta_j>; mu = softmax(eta); phi = exp(<d, gamma>).
MeanPrecision linear_predictors(const DesignRow& row, const Coefficients& coeffs);

double negative_log_likelihood(const Dataset& data, const Coefficients& coeffs);

// Analytic gradient of the NLL with respect to (beta rows..., gamma).
std::vector<double> nll_gradient(const Dataset& data, const Coefficients& coeffs);

// Deterministic moment-based starting point used by fit_mle: intercepts
// from logits of the sample component means, precision intercept from a
// method-of-moments estimate, slopes zero.
Coefficients initial_coefficients(const Dataset& train);

// BFGS maximum-likelihood fit from a deterministic moment-based start.
FittedModel fit_mle(const Dataset& train, const FitConfig& config = {});

MeanPrecision predict_params(const FittedModel& model, const DesignRow& row);

}  // namespace simplexconf

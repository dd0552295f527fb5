#include "simplexconf/regression.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "simplexconf/errors.hpp"
#include "simplexconf/special_functions.hpp"

namespace simplexconf {

namespace {

constexpr double kMaxLogPhi = 700.0;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Fixed-order pairwise reduction; keeps sums deterministic and well
// conditioned independent of dataset size.
template <typename F>
double pairwise_sum(std::size_t lo, std::size_t hi, const F& term) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

void check_dimensions(const DesignRow& row, const Coefficients& coeffs) {
    if (coeffs.beta.empty()) {
        throw DomainError("linear_predictors: empty coefficient matrix");
    }
    for (const auto& b : coeffs.beta) {
        if (b.size() != row.mean_covariates.size()) {
            throw DomainError("linear_predictors: mean covariate dimension mismatch");
        }
    }
    if (coeffs.gamma.size() != row.precision_covariates.size()) {
        throw DomainError("linear_predictors: precision covariate dimension mismatch");
    }
}

// Flat parameter layout: beta rows for components 2..D, then gamma.
std::vector<double> flatten(const Coefficients& c) {
    std::vector<double> out;
    out.reserve(c.n_parameters());
    for (const auto& row : c.beta) out.insert(out.end(), row.begin(), row.end());
    out.insert(out.end(), c.gamma.begin(), c.gamma.end());
    return out;
}

Coefficients unflatten(const std::vector<double>& x, std::size_t d_minus_1, std::size_t p,
                       std::size_t p_phi) {
    Coefficients c;
    c.beta.assign(d_minus_1, std::vector<double>(p));
    std::size_t k = 0;
    for (auto& row : c.beta) {
        for (auto& v : row) v = x[k++];
    }
    c.gamma.assign(x.begin() + k, x.begin() + k + p_phi);
    return c;
}

// Joint NLL value/gradient evaluator with cached responses in log scale.
class NllEvaluator {
  public:
    NllEvaluator(const Dataset& data, std::size_t d, std::size_t p, std::size_t p_phi)
        : data_(data), d_(d), p_(p), p_phi_(p_phi) {
        log_y_.resize(data.size() * d);
        for (std::size_t i = 0; i < data.size(); ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                log_y_[i * d_ + j] = std::log(data[i].y[j]);
            }
        }
    }

    std::size_t n_params() const { return (d_ - 1) * p_ + p_phi_; }

    // NLL alone; +infinity on link overflow so line searches back off.
    double value(const std::vector<double>& x) const {
        const double s = pairwise_sum(0, data_.size(),
                                      [&](std::size_t i) { return obs_value(x, i); });
        return s;
    }

    // NLL and its gradient; returns +infinity (gradient unspecified) on
    // overflow.
    double value_grad(const std::vector<double>& x, std::vector<double>& grad) const {
        grad.assign(n_params(), 0.0);
        std::vector<double> buf(n_params());
        const double s = value_grad_range(x, 0, data_.size(), grad, buf);
        return s;
    }

  private:
    double obs_value(const std::vector<double>& x, std::size_t i) const {
        const DesignRow& row = data_[i].x;
        double eta_max = 0.0;
        std::vector<double> eta(d_, 0.0);
        for (std::size_t r = 0; r + 1 < d_; ++r) {
            double e = 0.0;
            for (std::size_t k = 0; k < p_; ++k) e += x[r * p_ + k] * row.mean_covariates[k];
            eta[r + 1] = e;
            eta_max = std::max(eta_max, e);
        }
        double zeta = 0.0;
        for (std::size_t k = 0; k < p_phi_; ++k) {
            zeta += x[(d_ - 1) * p_ + k] * row.precision_covariates[k];
        }
        if (!(std::fabs(zeta) <= kMaxLogPhi)) {
            return std::numeric_limits<double>::infinity();
        }
        double denom = 0.0;
        for (std::size_t j = 0; j < d_; ++j) denom += std::exp(eta[j] - eta_max);
        const double phi = std::exp(zeta);
        double ll = log_gamma(phi);
        const double log_denom = std::log(denom) + eta_max;
        for (std::size_t j = 0; j < d_; ++j) {
            const double mu_j = std::exp(eta[j] - log_denom);
            const double lambda_j = phi * mu_j;
            if (!(lambda_j > 0.0) || !std::isfinite(lambda_j)) {
                return std::numeric_limits<double>::infinity();
            }
            ll += -log_gamma(lambda_j) + (lambda_j - 1.0) * log_y_[i * d_ + j];
        }
        return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
    }

    double value_grad_range(const std::vector<double>& x, std::size_t lo, std::size_t hi,
                            std::vector<double>& grad, std::vector<double>& buf) const {
        if (hi - lo <= 8) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) {
                s += obs_value_grad(x, i, grad);
                if (!std::isfinite(s)) return s;
            }
            return s;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        const double left = value_grad_range(x, lo, mid, grad, buf);
        if (!std::isfinite(left)) return left;
        std::vector<double> right_grad(grad.size(), 0.0);
        const double right = value_grad_range(x, mid, hi, right_grad, buf);
        for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += right_grad[k];
        return left + right;
    }

    double obs_value_grad(const std::vector<double>& x, std::size_t i,
                          std::vector<double>& grad) const {
        const DesignRow& row = data_[i].x;
        std::vector<double> eta(d_, 0.0);
        double eta_max = 0.0;
        for (std::size_t r = 0; r + 1 < d_; ++r) {
            double e = 0.0;
            for (std::size_t k = 0; k < p_; ++k) e += x[r * p_ + k] * row.mean_covariates[k];
            eta[r + 1] = e;
            eta_max = std::max(eta_max, e);
        }
        double zeta = 0.0;
        for (std::size_t k = 0; k < p_phi_; ++k) {
            zeta += x[(d_ - 1) * p_ + k] * row.precision_covariates[k];
        }
        if (!(std::fabs(zeta) <= kMaxLogPhi)) {
            return std::numeric_limits<double>::infinity();
        }
        const double phi = std::exp(zeta);
        double denom = 0.0;
        for (std::size_t j = 0; j < d_; ++j) denom += std::exp(eta[j] - eta_max);
        const double log_denom = std::log(denom) + eta_max;

        std::vector<double> mu(d_), g(d_);
        double ll = log_gamma(phi);
        double gbar = 0.0;
        for (std::size_t j = 0; j < d_; ++j) {
            mu[j] = std::exp(eta[j] - log_denom);
            const double lambda_j = phi * mu[j];
            if (!(lambda_j > 0.0) || !std::isfinite(lambda_j)) {
                return std::numeric_limits<double>::infinity();
            }
            const double ly = log_y_[i * d_ + j];
            ll += -log_gamma(lambda_j) + (lambda_j - 1.0) * ly;
            g[j] = ly - digamma(lambda_j);
            gbar += mu[j] * g[j];
        }
        if (!std::isfinite(ll)) return std::numeric_limits<double>::infinity();

        for (std::size_t r = 0; r + 1 < d_; ++r) {
            const double dll_deta = phi * mu[r + 1] * (g[r + 1] - gbar);
            for (std::size_t k = 0; k < p_; ++k) {
                grad[r * p_ + k] -= dll_deta * row.mean_covariates[k];
            }
        }
        const double dll_dzeta = phi * (digamma(phi) + gbar);
        for (std::size_t k = 0; k < p_phi_; ++k) {
            grad[(d_ - 1) * p_ + k] -= dll_dzeta * row.precision_covariates[k];
        }
        return -ll;
    }

    const Dataset& data_;
    std::size_t d_, p_, p_phi_;
    std::vector<double> log_y_;
};

void check_dataset(const Dataset& data) {
    if (data.empty()) {
        throw DomainError("regression: empty dataset");
    }
    const std::size_t d = data.front().y.dim();
    const std::size_t p = data.front().x.mean_covariates.size();
    const std::size_t p_phi = data.front().x.precision_covariates.size();
    for (const auto& obs : data) {
        if (obs.y.dim() != d || obs.x.mean_covariates.size() != p ||
            obs.x.precision_covariates.size() != p_phi) {
            throw DomainError("regression: ragged dataset");
        }
    }
}

// Rank check on the Gram matrix via Cholesky with a relative pivot floor.
void check_full_rank(const Dataset& data, bool precision_block) {
    const std::size_t p = precision_block ? data.front().x.precision_covariates.size()
                                          : data.front().x.mean_covariates.size();
    std::vector<double> gram(p * p, 0.0);
    for (const auto& obs : data) {
        const auto& v = precision_block ? obs.x.precision_covariates : obs.x.mean_covariates;
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i; j < p; ++j) gram[i * p + j] += v[i] * v[j];
        }
    }
    double max_diag = 0.0;
    for (std::size_t i = 0; i < p; ++i) max_diag = std::max(max_diag, gram[i * p + i]);
    std::vector<double> chol(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            double s = gram[i * p + j];
            for (std::size_t k = 0; k < i; ++k) s -= chol[k * p + i] * chol[k * p + j];
            if (i == j) {
                if (s <= 1e-10 * max_diag) {
                    throw RankError("fit_mle: singular design matrix");
                }
                chol[i * p + j] = std::sqrt(s);
            } else {
                chol[i * p + j] = s / chol[i * p + i];
            }
        }
    }
}

std::vector<double> initial_point(const Dataset& data, std::size_t d, std::size_t p,
                                  std::size_t p_phi) {
    const double n = static_cast<double>(data.size());
    std::vector<double> m(d, 0.0), v(d, 0.0);
    for (const auto& obs : data) {
        for (std::size_t j = 0; j < d; ++j) m[j] += obs.y[j];
    }
    for (double& x : m) x /= n;
    for (const auto& obs : data) {
        for (std::size_t j = 0; j < d; ++j) {
            const double e = obs.y[j] - m[j];
            v[j] += e * e;
        }
    }
    for (double& x : v) x /= std::max(1.0, n - 1.0);

    std::vector<double> x((d - 1) * p + p_phi, 0.0);
    for (std::size_t r = 0; r + 1 < d; ++r) {
        x[r * p] = std::log(m[r + 1] / m[0]);
    }
    // Method-of-moments precision: median of m_j (1-m_j) / v_j - 1.
    std::vector<double> phis;
    for (std::size_t j = 0; j < d; ++j) {
        if (v[j] > 1e-12) phis.push_back(m[j] * (1.0 - m[j]) / v[j] - 1.0);
    }
    double phi0 = 1.0;
    if (!phis.empty()) {
        std::sort(phis.begin(), phis.end());
        phi0 = phis[phis.size() / 2];
        if (phis.size() % 2 == 0) phi0 = 0.5 * (phi0 + phis[phis.size() / 2 - 1]);
    }
    phi0 = std::clamp(phi0, 1e-2, 1e6);
    x[(d - 1) * p] = std::log(phi0);
    return x;
}

}  // namespace

MeanPrecision linear_predictors(const DesignRow& row, const Coefficients& coeffs) {
    check_dimensions(row, coeffs);
    const std::size_t d = coeffs.n_components();
    std::vector<double> eta(d, 0.0);
    double eta_max = 0.0;
    for (std::size_t r = 0; r + 1 < d; ++r) {
        eta[r + 1] = dot(row.mean_covariates, coeffs.beta[r]);
        if (!std::isfinite(eta[r + 1])) {
            throw NumericError("linear_predictors: non-finite mean logit");
        }
        eta_max = std::max(eta_max, eta[r + 1]);
    }
    const double zeta = dot(row.precision_covariates, coeffs.gamma);
    if (!(std::fabs(zeta) <= kMaxLogPhi)) {
        throw NumericError("linear_predictors: precision link overflow");
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < d; ++j) denom += std::exp(eta[j] - eta_max);
    std::vector<double> mu(d);
    for (std::size_t j = 0; j < d; ++j) mu[j] = std::exp(eta[j] - eta_max) / denom;
    return MeanPrecision{std::move(mu), std::exp(zeta)};
}

double negative_log_likelihood(const Dataset& data, const Coefficients& coeffs) {
    check_dataset(data);
    const double nll = pairwise_sum(0, data.size(), [&](std::size_t i) {
        return -log_density(data[i].y, linear_predictors(data[i].x, coeffs));
    });
    if (!std::isfinite(nll)) {
        throw NumericError("negative_log_likelihood: non-finite value");
    }
    return nll;
}

std::vector<double> nll_gradient(const Dataset& data, const Coefficients& coeffs) {
    if (data.empty()) {
        return std::vector<double>(coeffs.n_parameters(), 0.0);
    }
    check_dataset(data);
    const std::size_t d = coeffs.n_components();
    const std::size_t p = coeffs.n_mean_covariates();
    const std::size_t p_phi = coeffs.gamma.size();
    NllEvaluator eval(data, d, p, p_phi);
    std::vector<double> grad;
    const double value = eval.value_grad(flatten(coeffs), grad);
    if (!std::isfinite(value)) {
        throw NumericError("nll_gradient: non-finite value");
    }
    return grad;
}

Coefficients initial_coefficients(const Dataset& train) {
    check_dataset(train);
    const std::size_t d = train.front().y.dim();
    const std::size_t p = train.front().x.mean_covariates.size();
    const std::size_t p_phi = train.front().x.precision_covariates.size();
    return unflatten(initial_point(train, d, p, p_phi), d - 1, p, p_phi);
}

FittedModel fit_mle(const Dataset& train, const FitConfig& config) {
    check_dataset(train);
    const std::size_t d = train.front().y.dim();
    const std::size_t p = train.front().x.mean_covariates.size();
    const std::size_t p_phi = train.front().x.precision_covariates.size();
    if (train.size() <= p + p_phi) {
        throw FitError("fit_mle: not enough observations for the design");
    }
    check_full_rank(train, false);
    check_full_rank(train, true);

    NllEvaluator eval(train, d, p, p_phi);
    const std::size_t n = eval.n_params();
    std::vector<double> x = initial_point(train, d, p, p_phi);
    std::vector<double> g(n), g_new(n);
    double f = eval.value_grad(x, g);
    if (!std::isfinite(f)) {
        throw FitError("fit_mle: non-finite likelihood at the initial point");
    }

    // Inverse-Hessian BFGS with backtracking Armijo line search.
    std::vector<double> H(n * n, 0.0);
    auto reset_h = [&] {
        std::fill(H.begin(), H.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
    };
    reset_h();

    std::vector<double> dir(n), x_new(n), s(n), yv(n), hy(n);
    int iter = 0;
    int flat_count = 0;
    bool converged = false;
    bool first_update = true;
    double gnorm = std::sqrt(dot(g, g));
    for (; iter < config.max_iterations; ++iter) {
        gnorm = std::sqrt(dot(g, g));
        if (gnorm <= config.gradient_tol) {
            converged = true;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s_i = 0.0;
            for (std::size_t j = 0; j < n; ++j) s_i += H[i * n + j] * g[j];
            dir[i] = -s_i;
        }
        double slope = dot(g, dir);
        if (slope >= 0.0) {
            reset_h();
            for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
            slope = -gnorm * gnorm;
        }
        double alpha = 1.0;
        double f_new = f;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + alpha * dir[i];
            f_new = eval.value(x_new);
            if (f_new <= f + config.armijo_c * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
            if (alpha < 1e-16) break;
        }
        if (!accepted) {
            // Stalled: near an optimum the Armijo test can fail on rounding.
            converged = gnorm <= 10.0 * config.gradient_tol;
            break;
        }
        const double f_accepted = eval.value_grad(x_new, g_new);
        const double decrease = f - f_accepted;
        f = f_accepted;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - x[i];
            yv[i] = g_new[i] - g[i];
        }
        const double ys = dot(yv, s);
        if (ys > 1e-12 * std::sqrt(dot(yv, yv) * dot(s, s))) {
            if (first_update) {
                // Nocedal's H0 scaling from the first curvature pair.
                const double scale = ys / dot(yv, yv);
                std::fill(H.begin(), H.end(), 0.0);
                for (std::size_t i = 0; i < n; ++i) H[i * n + i] = scale;
                first_update = false;
            }
            const double rho = 1.0 / ys;
            double yhy = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double t = 0.0;
                for (std::size_t j = 0; j < n; ++j) t += H[i * n + j] * yv[j];
                hy[i] = t;
            }
            for (std::size_t i = 0; i < n; ++i) yhy += yv[i] * hy[i];
            const double c2 = rho * rho * yhy + rho;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    H[i * n + j] += -rho * (s[i] * hy[j] + hy[i] * s[j]) + c2 * s[i] * s[j];
                }
            }
        } else {
            reset_h();
        }
        x = x_new;
        g = g_new;
        // Stop when progress sits at the rounding floor of the objective
        // and the gradient is already below the diagnostic threshold.
        flat_count = decrease <= 1e-13 * (1.0 + std::fabs(f)) ? flat_count + 1 : 0;
        if (flat_count >= 3 && std::sqrt(dot(g, g)) <= 1e-5) {
            converged = true;
            ++iter;
            break;
        }
    }
    gnorm = std::sqrt(dot(g, g));
    if (!converged && gnorm > config.gradient_tol) {
        if (iter >= config.max_iterations) {
            throw FitError("fit_mle: no convergence after max iterations (|grad|=" +
                           std::to_string(gnorm) + ")");
        }
        throw FitError("fit_mle: line search failed (|grad|=" + std::to_string(gnorm) + ")");
    }

    FittedModel model;
    model.coefficients = unflatten(x, d - 1, p, p_phi);
    model.D = d;
    model.convergence = Convergence{true, iter, gnorm, f};
    return model;
}

MeanPrecision FittedModel::predict(const DesignRow& row) const {
    return linear_predictors(row, coefficients);
}

MeanPrecision FittedModel::predict_raw(const DesignRow& raw_row) const {
    if (!standardization.has_value() || standardization->empty()) {
        return predict(raw_row);
    }
    DesignRow row = raw_row;
    const auto apply = [](std::vector<double>& v, const std::vector<CovariateScaling>& sc) {
        if (sc.size() != v.size()) {
            throw DomainError("predict_raw: standardization dimension mismatch");
        }
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (sc[k].standardize) v[k] = (v[k] - sc[k].mean) / sc[k].scale;
        }
    };
    apply(row.mean_covariates, standardization->mean_block);
    apply(row.precision_covariates, standardization->precision_block);
    return predict(row);
}

MeanPrecision predict_params(const FittedModel& model, const DesignRow& row) {
    return model.predict(row);
}

}  // namespace simplexconf

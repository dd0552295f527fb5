#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "simplexconf/errors.hpp"
#include "simplexconf/regression.hpp"
#include "simplexconf/simulation.hpp"

using namespace simplexconf;

namespace {

Coefficients scenario1a_coefficients() {
    Coefficients c;
    c.beta = {{-0.3, 1.0, -0.5}, {-0.3, -0.5, 1.0}};
    c.gamma = {3.0, 0.0, 0.0};
    return c;
}

Dataset synthetic_data(std::size_t n, std::uint64_t seed) {
    ScenarioSpec spec = scenario_spec("1a");
    spec.seed = seed;
    spec.n = n;
    return generate_scenario(spec);
}

double nll_reference(const Dataset& data, const Coefficients& coeffs) {
    // Direct Eq-style evaluation with the C library's lgamma.
    double total = 0.0;
    for (const auto& obs : data) {
        const MeanPrecision mp = linear_predictors(obs.x, coeffs);
        double ll = std::lgamma(mp.phi);
        for (std::size_t j = 0; j < mp.dim(); ++j) {
            ll += -std::lgamma(mp.phi * mp.mu[j]) +
                  (mp.phi * mp.mu[j] - 1.0) * std::log(obs.y[j]);
        }
        total -= ll;
    }
    return total;
}

}  // namespace

TEST_CASE("linear predictors") {
    Coefficients zero;
    zero.beta = {{0.0, 0.0}, {0.0, 0.0}};
    zero.gamma = {0.0};
    const DesignRow row{{1.0, 0.4}, {1.0}};
    const MeanPrecision mp = linear_predictors(row, zero);
    for (double m : mp.mu) CHECK(m == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(mp.phi == doctest::Approx(1.0));

    const Coefficients truth = scenario1a_coefficients();
    const DesignRow x{{1.0, 0.5, 0.5}, {1.0, 0.5, 0.5}};
    const MeanPrecision p = linear_predictors(x, truth);
    CHECK(p.mu[0] == doctest::Approx(0.344536).epsilon(1e-5));
    CHECK(p.mu[1] == doctest::Approx(0.327732).epsilon(1e-5));
    CHECK(p.mu[2] == doctest::Approx(0.327732).epsilon(1e-5));
    CHECK(p.phi == doctest::Approx(20.0855369231877).epsilon(1e-10));

    double total = 0.0;
    for (double m : p.mu) total += m;
    CHECK(std::fabs(total - 1.0) < 1e-12);

    // Logit consistency: log(mu_j / mu_1) recovers the linear predictor.
    CHECK(std::log(p.mu[1] / p.mu[0]) == doctest::Approx(-0.05).epsilon(1e-10));
    CHECK(std::log(p.mu[2] / p.mu[0]) == doctest::Approx(-0.05).epsilon(1e-10));
}

TEST_CASE("softmax guards and shift invariance") {
    // Huge logits must not overflow thanks to max subtraction.
    Coefficients big;
    big.beta = {{500.0}, {500.3}};
    big.gamma = {0.0};
    const MeanPrecision mp = linear_predictors(DesignRow{{1.0}, {1.0}}, big);
    double total = 0.0;
    for (double m : mp.mu) {
        CHECK(std::isfinite(m));
        total += m;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Shifting every logit by a constant leaves the softmax unchanged.
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> eta(3);
        for (auto& e : eta) e = 10.0 * (rng.uniform() - 0.5);
        const double c = 100.0 * (rng.uniform() - 0.5);
        const auto softmax = [](const std::vector<double>& v) {
            const double m = *std::max_element(v.begin(), v.end());
            double denom = 0.0;
            for (double x : v) denom += std::exp(x - m);
            std::vector<double> out;
            for (double x : v) out.push_back(std::exp(x - m) / denom);
            return out;
        };
        std::vector<double> shifted(eta);
        for (auto& e : shifted) e += c;
        const auto a = softmax(eta), b = softmax(shifted);
        for (std::size_t j = 0; j < 3; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-12));
    }

    Coefficients overflow;
    overflow.beta = {{0.0}, {0.0}};
    overflow.gamma = {800.0};
    CHECK_THROWS_AS(linear_predictors(DesignRow{{1.0}, {1.0}}, overflow), NumericError);
}

TEST_CASE("negative log likelihood") {
    Coefficients c;
    c.beta = {{std::log(1.0)}};  // mu = (0.5, 0.5) ... reference logit zero
    c.gamma = {std::log(2.0)};
    const Dataset single{{DesignRow{{1.0}, {1.0}}, CompositionalVector({0.3, 0.7})}};
    CHECK(negative_log_likelihood(single, c) == doctest::Approx(0.0).epsilon(1e-12));

    const Dataset data = synthetic_data(60, 1);
    const Coefficients truth = scenario1a_coefficients();
    const Dataset part_a(data.begin(), data.begin() + 25);
    const Dataset part_b(data.begin() + 25, data.end());
    CHECK(negative_log_likelihood(data, truth) ==
          doctest::Approx(negative_log_likelihood(part_a, truth) +
                          negative_log_likelihood(part_b, truth))
              .epsilon(1e-12));
    CHECK(negative_log_likelihood(data, truth) ==
          doctest::Approx(nll_reference(data, truth)).epsilon(1e-11));

    // Permutation invariance over observations.
    Dataset shuffled = data;
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(negative_log_likelihood(shuffled, truth) ==
          doctest::Approx(negative_log_likelihood(data, truth)).epsilon(1e-12));
}

TEST_CASE("gradient matches finite differences") {
    const Dataset data = synthetic_data(50, 7);
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        Coefficients c;
        c.beta = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
        c.gamma = {0.0, 0.0, 0.0};
        for (auto& row : c.beta) {
            for (auto& v : row) v = 1.5 * (rng.uniform() - 0.5);
        }
        for (auto& v : c.gamma) v = 1.5 * (rng.uniform() - 0.5);
        c.gamma[0] += 1.5;

        const std::vector<double> grad = nll_gradient(data, c);
        std::size_t k = 0;
        const auto check_fd = [&](double& slot) {
            const double h = 1e-6;
            const double orig = slot;
            slot = orig + h;
            const double up = negative_log_likelihood(data, c);
            slot = orig - h;
            const double down = negative_log_likelihood(data, c);
            slot = orig;
            const double fd = (up - down) / (2.0 * h);
            CHECK(std::fabs(grad[k] - fd) <= 1e-4 * std::max(1.0, std::fabs(fd)));
            ++k;
        };
        for (auto& row : c.beta) {
            for (auto& v : row) check_fd(v);
        }
        for (auto& v : c.gamma) check_fd(v);
    }

    const Coefficients c0 = scenario1a_coefficients();
    const std::vector<double> zero_grad = nll_gradient(Dataset{}, c0);
    for (double g : zero_grad) CHECK(g == 0.0);
}

TEST_CASE("fit on scenario data") {
    const Dataset data = synthetic_data(1200, 3);
    const FittedModel model = fit_mle(data);
    CHECK(model.convergence.converged);
    CHECK(model.convergence.gradient_norm <= 1e-5);

    // First-order condition through the public gradient.
    const std::vector<double> grad = nll_gradient(data, model.coefficients);
    double norm = 0.0;
    for (double g : grad) norm += g * g;
    CHECK(std::sqrt(norm) <= 1e-5);

    // Fitted NLL does not exceed the NLL at the deterministic start.
    CHECK(negative_log_likelihood(data, model.coefficients) <=
          negative_log_likelihood(data, initial_coefficients(data)) + 1e-9);

    // Determinism.
    const FittedModel again = fit_mle(data);
    for (std::size_t r = 0; r < model.coefficients.beta.size(); ++r) {
        for (std::size_t k = 0; k < model.coefficients.beta[r].size(); ++k) {
            CHECK(model.coefficients.beta[r][k] == again.coefficients.beta[r][k]);
        }
    }
    for (std::size_t k = 0; k < model.coefficients.gamma.size(); ++k) {
        CHECK(model.coefficients.gamma[k] == again.coefficients.gamma[k]);
    }
}

TEST_CASE("fit recovers scenario coefficients") {
    const Coefficients truth = scenario1a_coefficients();
    int hits = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
        const Dataset data = synthetic_data(5000, 1000 + rep);
        const FittedModel model = fit_mle(data);
        bool ok = true;
        for (std::size_t r = 0; r < 2; ++r) {
            for (std::size_t k = 0; k < 3; ++k) {
                ok = ok && std::fabs(model.coefficients.beta[r][k] - truth.beta[r][k]) < 0.1;
            }
        }
        for (std::size_t k = 0; k < 3; ++k) {
            ok = ok && std::fabs(model.coefficients.gamma[k] - truth.gamma[k]) < 0.1;
        }
        hits += ok ? 1 : 0;
    }
    CHECK(hits >= 95);
}

TEST_CASE("intercept-only fit on symmetric data") {
    // Symmetrize draws: every permutation of each point appears once.
    ScenarioSpec spec = scenario_spec("1a");
    spec.seed = 17;
    spec.n = 300;
    const Dataset raw = generate_scenario(spec);
    Dataset sym;
    const DesignRow row{{1.0}, {1.0}};
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& obs : raw) {
        for (const auto& p : perms) {
            sym.push_back(Observation{
                row, CompositionalVector({obs.y[p[0]], obs.y[p[1]], obs.y[p[2]]})});
        }
    }
    const FittedModel model = fit_mle(sym);
    CHECK(std::fabs(model.coefficients.beta[0][0]) < 1e-3);
    CHECK(std::fabs(model.coefficients.beta[1][0]) < 1e-3);
}

TEST_CASE("fit error paths") {
    const Dataset tiny = synthetic_data(5, 5);
    CHECK_THROWS_AS(fit_mle(tiny), FitError);

    // Duplicated covariate column makes the design singular.
    Dataset bad;
    ScenarioSpec spec = scenario_spec("1a");
    spec.seed = 9;
    spec.n = 100;
    for (const auto& obs : generate_scenario(spec)) {
        DesignRow row = obs.x;
        row.mean_covariates.push_back(row.mean_covariates[1]);
        bad.push_back(Observation{row, obs.y});
    }
    CHECK_THROWS_AS(fit_mle(bad), RankError);
}

TEST_CASE("prediction applies stored standardization once") {
    const Dataset data = synthetic_data(800, 21);
    FittedModel model = fit_mle(data);
    const DesignRow row = data.front().x;
    const MeanPrecision direct = predict_params(model, row);
    const MeanPrecision via_linear = linear_predictors(row, model.coefficients);
    for (std::size_t j = 0; j < 3; ++j) CHECK(direct.mu[j] == via_linear.mu[j]);
    CHECK(direct.phi == via_linear.phi);

    Standardization std_info;
    std_info.mean_block = {{false, 0.0, 1.0}, {true, 0.5, 0.2}, {true, 0.5, 0.2}};
    std_info.precision_block = std_info.mean_block;
    model.standardization = std_info;
    DesignRow raw = row;
    for (std::size_t k = 1; k < 3; ++k) {
        raw.mean_covariates[k] = row.mean_covariates[k] * 0.2 + 0.5;
        raw.precision_covariates[k] = row.precision_covariates[k] * 0.2 + 0.5;
    }
    const MeanPrecision via_raw = model.predict_raw(raw);
    for (std::size_t j = 0; j < 3; ++j) {
        CHECK(via_raw.mu[j] == doctest::Approx(direct.mu[j]).epsilon(1e-12));
    }
    CHECK(via_raw.phi == doctest::Approx(direct.phi).epsilon(1e-12));
}

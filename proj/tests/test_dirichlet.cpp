#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "simplexconf/dirichlet.hpp"
#include "simplexconf/errors.hpp"
#include "simplexconf/special_functions.hpp"

using namespace simplexconf;

namespace {

// Direct density evaluation via the C library's lgamma, independent of
// log_density's internals.
double log_density_reference(const std::vector<double>& y, const std::vector<double>& mu,
                             double phi) {
    double out = std::lgamma(phi);
    for (std::size_t j = 0; j < y.size(); ++j) {
        out += -std::lgamma(phi * mu[j]) + (phi * mu[j] - 1.0) * std::log(y[j]);
    }
    return out;
}

}  // namespace

TEST_CASE("parameterization conversions") {
    const MeanPrecision mp = make_mean_precision({0.5, 0.5}, 2.0);
    const ShapeParams sp = to_shape(mp);
    CHECK(sp.lambda[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sp.lambda[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sp.lambda0 == doctest::Approx(2.0).epsilon(1e-15));

    const ShapeParams sp2 = to_shape(make_mean_precision({0.2, 0.3, 0.5}, 10.0));
    CHECK(sp2.lambda[0] == doctest::Approx(2.0));
    CHECK(sp2.lambda[1] == doctest::Approx(3.0));
    CHECK(sp2.lambda[2] == doctest::Approx(5.0));

    const MeanPrecision mp3 = to_mean_precision(make_shape_params({7.0, 7.0, 7.0, 7.0}));
    CHECK(mp3.phi == doctest::Approx(28.0));
    for (double m : mp3.mu) CHECK(m == doctest::Approx(0.25).epsilon(1e-14));

    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        std::vector<double> lambda(3);
        for (auto& l : lambda) l = 0.1 + 20.0 * rng.uniform();
        const ShapeParams orig = make_shape_params(lambda);
        const ShapeParams back = to_shape(to_mean_precision(orig));
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::fabs(back.lambda[j] - orig.lambda[j]) < 1e-12 * orig.lambda0);
        }
    }
}

TEST_CASE("log_density values and symmetry") {
    const MeanPrecision uniform2 = make_mean_precision({0.5, 0.5}, 2.0);
    for (double y1 : {0.1, 0.37, 0.8}) {
        CHECK(log_density(CompositionalVector({y1, 1.0 - y1}), uniform2) ==
              doctest::Approx(0.0).epsilon(1e-13));
    }

    const MeanPrecision sym3 = to_mean_precision(make_shape_params({2.0, 2.0, 2.0}));
    const CompositionalVector centroid({1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(log_density(centroid, sym3) == doctest::Approx(1.491655).epsilon(1e-6));
    CHECK(log_density(centroid, sym3) ==
          doctest::Approx(std::log(120.0 / 27.0)).epsilon(1e-13));

    // Permutation equivariance.
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> mu(3), y(3);
        double mu_total = 0.0, y_total = 0.0;
        for (int j = 0; j < 3; ++j) {
            mu[j] = 0.05 + rng.uniform();
            y[j] = 0.05 + rng.uniform();
            mu_total += mu[j];
            y_total += y[j];
        }
        for (int j = 0; j < 3; ++j) {
            mu[j] /= mu_total;
            y[j] /= y_total;
        }
        const double phi = 0.5 + 30.0 * rng.uniform();
        std::vector<std::size_t> perm{0, 1, 2};
        rng.shuffle(perm);
        std::vector<double> mu_p(3), y_p(3);
        for (int j = 0; j < 3; ++j) {
            mu_p[j] = mu[perm[j]];
            y_p[j] = y[perm[j]];
        }
        const double a = log_density(CompositionalVector(y), make_mean_precision(mu, phi));
        const double b =
            log_density(CompositionalVector(y_p), make_mean_precision(mu_p, phi));
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }

    CHECK_THROWS_AS(CompositionalVector({0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(CompositionalVector({0.4, 0.4}), DomainError);
    CHECK_THROWS_AS(log_density(CompositionalVector({0.5, 0.5}), sym3), DomainError);
}

TEST_CASE("log_density matches an independent direct evaluation") {
    Rng rng(23);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> mu(4), y(4);
        double mu_total = 0.0, y_total = 0.0;
        for (int j = 0; j < 4; ++j) {
            mu[j] = 0.1 + rng.uniform();
            y[j] = 0.1 + rng.uniform();
            mu_total += mu[j];
            y_total += y[j];
        }
        for (int j = 0; j < 4; ++j) {
            mu[j] /= mu_total;
            y[j] /= y_total;
        }
        const double phi = 0.2 + 50.0 * rng.uniform();
        const double got = log_density(CompositionalVector(y), make_mean_precision(mu, phi));
        CHECK(got == doctest::Approx(log_density_reference(y, mu, phi)).epsilon(1e-12));
    }
}

TEST_CASE("log_density integrates to one for D=2") {
    // Substitution y = sin^2(t) keeps the integrand smooth at the endpoints.
    for (auto [a, b] : {std::pair{2.0, 3.0}, std::pair{5.0, 1.5}}) {
        const MeanPrecision mp = to_mean_precision(make_shape_params({a, b}));
        const auto integrand = [&](double t) {
            const double s = std::sin(t), c = std::cos(t);
            const double y = s * s;
            if (y <= 0.0 || y >= 1.0) return 0.0;
            return std::exp(log_density(CompositionalVector({y, 1.0 - y}), mp)) * 2.0 * s * c;
        };
        const int n = 4096;
        const double h = (1.5707963267948966) / n;
        double acc = integrand(0.0) + integrand(1.5707963267948966);
        for (int i = 1; i < n; ++i) acc += integrand(i * h) * (i % 2 ? 4.0 : 2.0);
        const double integral = acc * h / 3.0;
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("component moments") {
    const MeanPrecision mp = make_mean_precision({0.5, 0.5}, 1.0);
    const auto [mean, variance] = component_moments(mp, 0);
    CHECK(mean == doctest::Approx(0.5));
    CHECK(variance == doctest::Approx(0.125).epsilon(1e-15));

    double prev = 1.0;
    for (double phi : {1.0, 5.0, 25.0, 125.0, 625.0}) {
        const auto [m, v] = component_moments(make_mean_precision({0.5, 0.5}, phi), 0);
        CHECK(m == doctest::Approx(0.5));
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(component_moments(mp, 5), DomainError);
}

TEST_CASE("sampling moments match within three standard errors") {
    const MeanPrecision mp = make_mean_precision({0.2, 0.3, 0.5}, 10.0);
    Rng rng(97);
    const int n = 1000000;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[i] = sample_dirichlet(mp, rng)[1];
    const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
    double var = 0.0, fourth = 0.0;
    for (double x : draws) {
        const double e = x - mean;
        var += e * e;
    }
    var /= n - 1;
    for (double x : draws) {
        const double e = x - mean;
        fourth += (e * e - var) * (e * e - var);
    }
    const double se_mean = std::sqrt(var / n);
    const double se_var = std::sqrt(fourth / n / n);
    const auto [true_mean, true_var] = component_moments(mp, 1);
    CHECK(std::fabs(mean - true_mean) < 3.0 * se_mean);
    CHECK(std::fabs(var - true_var) < 3.0 * se_var);
}

TEST_CASE("sampling basics") {
    const MeanPrecision mp = make_mean_precision({0.1, 0.6, 0.3}, 4.0);
    Rng rng(11);
    for (int i = 0; i < 100000; ++i) {
        const CompositionalVector y = sample_dirichlet(mp, rng);
        double total = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(y[j] > 0.0);
            total += y[j];
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    Rng r1(42), r2(42);
    const CompositionalVector a = sample_dirichlet(mp, r1);
    const CompositionalVector b = sample_dirichlet(mp, r2);
    for (std::size_t j = 0; j < 3; ++j) CHECK(a[j] == b[j]);
}

TEST_CASE("marginal beta law") {
    const MeanPrecision mp = make_mean_precision({0.2, 0.3, 0.5}, 10.0);
    const auto [a, b] = marginal_beta(mp, 0);
    CHECK(a == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(b == doctest::Approx(8.0).epsilon(1e-14));
    for (std::size_t j = 0; j < 3; ++j) {
        const auto [aj, bj] = marginal_beta(mp, j);
        CHECK(aj + bj == doctest::Approx(mp.phi).epsilon(1e-15));
        CHECK(aj == doctest::Approx(bj * mp.mu[j] / (1.0 - mp.mu[j])).epsilon(1e-12));
    }

    // Empirical CDF of sampled component vs beta_cdf (Kolmogorov-Smirnov).
    Rng rng(31);
    const int n = 100000;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) draws[i] = sample_dirichlet(mp, rng)[0];
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = beta_cdf(draws[i], 2.0, 8.0);
        ks = std::max(ks, std::fabs(f - static_cast<double>(i + 1) / n));
        ks = std::max(ks, std::fabs(f - static_cast<double>(i) / n));
    }
    CHECK(ks < 0.01);
}

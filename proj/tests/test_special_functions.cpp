#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "simplexconf/errors.hpp"
#include "simplexconf/special_functions.hpp"

using namespace simplexconf;

namespace {

// Binomial-sum oracle for integer-parameter incomplete beta:
// I_y(a,b) = P(Bin(a+b-1, y) >= a).
double ibeta_binomial_oracle(double y, int a, int b) {
    const int n = a + b - 1;
    double total = 0.0;
    for (int k = a; k <= n; ++k) {
        double coef = 1.0;
        for (int i = 0; i < k; ++i) coef *= static_cast<double>(n - i) / (k - i);
        total += coef * std::pow(y, k) * std::pow(1.0 - y, n - k);
    }
    return total;
}

// Composite Simpson quadrature of the standard normal density on [0, z].
double normal_cdf_quadrature_oracle(double z) {
    const int n = 4000;  // even
    const double h = z / n;
    auto pdf = [](double t) { return std::exp(-0.5 * t * t) / 2.5066282746310005024; };
    double acc = pdf(0.0) + pdf(z);
    for (int i = 1; i < n; ++i) acc += pdf(i * h) * (i % 2 ? 4.0 : 2.0);
    return 0.5 + acc * h / 3.0;
}

}  // namespace

TEST_CASE("log_gamma values") {
    CHECK(std::fabs(log_gamma(1.0)) < 1e-12);
    CHECK(log_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-12));
    CHECK(log_gamma(5.0) == doctest::Approx(3.1780538303479458).epsilon(1e-12));
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
    CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST_CASE("log_gamma against the C library across the domain") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> expo(-6.0, 6.0);
    for (int i = 0; i < 20000; ++i) {
        const double x = std::pow(10.0, expo(gen));
        const double ref = std::lgamma(x);
        const double got = log_gamma(x);
        CHECK(std::fabs(got - ref) <= 1e-12 * std::max(1.0, std::fabs(ref)));
    }
}

TEST_CASE("log_gamma recurrence") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unif(0.1, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = unif(gen);
        const double lhs = log_gamma(x + 1.0);
        const double rhs = log_gamma(x) + std::log(x);
        CHECK(std::fabs(lhs - rhs) <= 1e-10 * std::max(1.0, std::fabs(rhs)));
    }
}

TEST_CASE("digamma values and finite differences") {
    CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-10));
    CHECK(digamma(2.0) == doctest::Approx(0.4227843350984671).epsilon(1e-10));
    CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-10));
    CHECK_THROWS_AS(digamma(0.0), DomainError);

    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> unif(0.05, 50.0);
    for (int i = 0; i < 500; ++i) {
        const double x = unif(gen);
        const double h = 1e-5;
        const double fd = (log_gamma(x + h) - log_gamma(x - h)) / (2.0 * h);
        CHECK(std::fabs(digamma(x) - fd) < 1e-5 * std::max(1.0, std::fabs(fd)));
    }
}

TEST_CASE("beta_cdf values") {
    CHECK(beta_cdf(0.5, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(beta_cdf(0.5, 2.0, 2.0) == doctest::Approx(0.5).epsilon(1e-13));
    // Integer-parameter case against the binomial-sum oracle.
    const double oracle = ibeta_binomial_oracle(0.4, 2, 3);
    CHECK(oracle == doctest::Approx(0.5248).epsilon(1e-12));
    CHECK(beta_cdf(0.4, 2.0, 3.0) == doctest::Approx(oracle).epsilon(1e-12));
    for (double y : {0.05, 0.2, 0.35, 0.6, 0.85}) {
        CHECK(std::fabs(beta_cdf(y, 3.0, 5.0) - ibeta_binomial_oracle(y, 3, 5)) < 1e-12);
        CHECK(std::fabs(beta_cdf(y, 6.0, 2.0) - ibeta_binomial_oracle(y, 6, 2)) < 1e-12);
    }
    CHECK(beta_cdf(0.0, 2.0, 3.0) == 0.0);
    CHECK(beta_cdf(1.0, 2.0, 3.0) == 1.0);
    CHECK_THROWS_AS(beta_cdf(-0.1, 2.0, 3.0), DomainError);
    CHECK_THROWS_AS(beta_cdf(0.5, 0.0, 3.0), DomainError);
    CHECK_THROWS_AS(beta_cdf(0.5, 2.0, -1.0), DomainError);
}

TEST_CASE("beta_cdf monotone in y") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = 0.2 + 30.0 * unif(gen);
        const double b = 0.2 + 30.0 * unif(gen);
        double y1 = unif(gen), y2 = unif(gen);
        if (y1 > y2) std::swap(y1, y2);
        CHECK(beta_cdf(y1, a, b) <= beta_cdf(y2, a, b) + 1e-14);
    }
}

TEST_CASE("beta_quantile inverts beta_cdf") {
    CHECK(beta_quantile(0.5, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(beta_quantile(0.5248, 2.0, 3.0) == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(beta_quantile(0.0, 2.0, 3.0) == 0.0);
    CHECK(beta_quantile(1.0, 2.0, 3.0) == 1.0);
    for (double a : {2.0, 5.0}) {
        const double b = (a == 2.0) ? 8.0 : 5.0;
        for (int i = 1; i <= 9; ++i) {
            const double y = 0.1 * i;
            const double p = beta_cdf(y, a, b);
            CHECK(beta_quantile(p, a, b) == doctest::Approx(y).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(beta_quantile(1.5, 2.0, 3.0), DomainError);
    CHECK_THROWS_AS(beta_quantile(0.5, -1.0, 3.0), DomainError);
}

TEST_CASE("normal_cdf values") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    const double quad = normal_cdf_quadrature_oracle(1.9599640);
    CHECK(std::fabs(quad - 0.975) < 1e-6);
    CHECK(std::fabs(normal_cdf(1.9599640) - quad) < 1e-10);
    CHECK(normal_cdf(-3.0) == doctest::Approx(1.0 - normal_cdf(3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(normal_cdf(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("normal_quantile values and roundtrips") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));

    // Bisection oracle on normal_cdf.
    double lo = 0.0, hi = 8.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (normal_cdf(mid) < 0.975 ? lo : hi) = mid;
    }
    const double oracle = 0.5 * (lo + hi);
    CHECK(oracle == doctest::Approx(1.9599640).epsilon(1e-6));
    CHECK(normal_quantile(0.975) == doctest::Approx(oracle).epsilon(1e-10));

    for (double z = -5.0; z <= 5.0; z += 0.25) {
        CHECK(normal_quantile(normal_cdf(z)) == doctest::Approx(z).epsilon(1e-8));
    }
    for (double p : {1e-10, 1e-4, 0.3, 0.7, 1.0 - 1e-4, 1.0 - 1e-10}) {
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-10));
    }
    CHECK(std::isinf(normal_quantile(0.0)));
    CHECK(normal_quantile(0.0) < 0.0);
    CHECK(std::isinf(normal_quantile(1.0)));
    CHECK(normal_quantile(1.0) > 0.0);
    CHECK_THROWS_AS(normal_quantile(-0.1), DomainError);
    CHECK_THROWS_AS(normal_quantile(1.1), DomainError);
}

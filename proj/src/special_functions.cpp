#include "simplexconf/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "simplexconf/errors.hpp"

namespace simplexconf {

namespace {

void require_finite_positive(double x, const char* fn) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(fn) + ": argument must be positive and finite");
    }
}

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2Pi = 2.5066282746310005024;

}  // namespace

double log_gamma(double x) {
    require_finite_positive(x, "log_gamma");
    // Lanczos, g = 607/128, 15 terms (Godfrey coefficients). The trailing
    // division by x folds in Gamma(x) = Gamma(x+1)/x, so small x is stable.
    static const double cof[14] = {
        57.1562356658629235,     -59.5979603554754912,
        14.1360979747417471,     -0.491913816097620199,
        0.339946499848118887e-4, 0.465236289270485756e-4,
        -0.983744753048795646e-4, 0.158088703224912494e-3,
        -0.210264441724104883e-3, 0.217439618115212643e-3,
        -0.164318106536763890e-3, 0.844182239838527433e-4,
        -0.261908384015814087e-4, 0.368991826595316234e-5};
    double y = x;
    double tmp = x + 5.24218750000000000;  // x + g + 1/2
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    for (double c : cof) ser += c / ++y;
    return tmp + std::log(kSqrt2Pi * ser / x);
}

double digamma(double x) {
    require_finite_positive(x, "digamma");
    // Recurrence psi(x) = psi(x+1) - 1/x until x >= 10, then the
    // asymptotic Bernoulli series.
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // B_2/2 x^-2, B_4/4 x^-4, ...
    const double series = inv2 * (1.0 / 12.0
                        - inv2 * (1.0 / 120.0
                        - inv2 * (1.0 / 252.0
                        - inv2 * (1.0 / 240.0
                        - inv2 * (1.0 / 132.0
                        - inv2 * (691.0 / 32760.0
                        - inv2 * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 * inv - series;
}

double log_beta(double a, double b) {
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cont_frac(double a, double b, double x) {
    constexpr int kMaxIter = 400;
    constexpr double kEps = 1e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("beta_cdf: continued fraction did not converge");
}

}  // namespace

double beta_cdf(double y, double a, double b) {
    require_finite_positive(a, "beta_cdf");
    require_finite_positive(b, "beta_cdf");
    if (!(y >= 0.0 && y <= 1.0)) {
        throw DomainError("beta_cdf: y outside [0,1]");
    }
    if (y == 0.0) return 0.0;
    if (y == 1.0) return 1.0;
    const double lbt = a * std::log(y) + b * std::log1p(-y) - log_beta(a, b);
    const double bt = std::exp(lbt);
    if (y < (a + 1.0) / (a + b + 2.0)) {
        return bt * beta_cont_frac(a, b, y) / a;
    }
    return 1.0 - bt * beta_cont_frac(b, a, 1.0 - y) / b;
}

double beta_quantile(double p, double a, double b) {
    require_finite_positive(a, "beta_quantile");
    require_finite_positive(b, "beta_quantile");
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("beta_quantile: p outside [0,1]");
    }
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;

    // Safeguarded Newton on I_y(a,b) - p with a bisection bracket.
    const double lbeta = log_beta(a, b);
    double lo = 0.0, hi = 1.0;
    double y = a / (a + b);
    for (int it = 0; it < 200; ++it) {
        const double f = beta_cdf(y, a, b) - p;
        if (f > 0.0) {
            hi = y;
        } else {
            lo = y;
        }
        if (std::fabs(f) < 1e-14 || hi - lo < 1e-15) break;
        const double lpdf = (a - 1.0) * std::log(y) + (b - 1.0) * std::log1p(-y) - lbeta;
        double step = f * std::exp(-lpdf);
        double next = y - step;
        if (!(next > lo && next < hi) || !std::isfinite(next)) {
            next = 0.5 * (lo + hi);
        }
        if (next == y) break;
        y = next;
    }
    return y;
}

double normal_cdf(double z) {
    if (!std::isfinite(z)) {
        throw DomainError("normal_cdf: non-finite argument");
    }
    return 0.5 * std::erfc(-z / kSqrt2);
}

double normal_quantile(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("normal_quantile: p outside [0,1]");
    }
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    // Acklam's rational approximation (~1e-9), then one Halley step
    // against normal_cdf brings it to full double precision.
    static const double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
            (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

}  // namespace simplexconf

#pragma once

// Scalar special functions used throughout: log-gamma, digamma, the
// regularized incomplete beta and its inverse, and the standard normal
// CDF/quantile pair. All routines are pure and reentrant.

namespace simplexconf {

// ln Gamma(x) for x > 0 (Lanczos approximation, ~1e-14 relative).
double log_gamma(double x);

// psi(x) = d/dx ln Gamma(x) for x > 0 (recurrence + asymptotic series).
double digamma(double x);

// ln B(a,b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b).
double log_beta(double a, double b);

// Regularized incomplete beta I_y(a,b) for y in [0,1], a,b > 0.
double beta_cdf(double y, double a, double b);

// Inverse of beta_cdf in y: returns y with I_y(a,b) = p.
double beta_quantile(double p, double a, double b);

// Standard normal CDF Phi(z).
double normal_cdf(double z);

// Standard normal quantile. p in (0,1); p == 0 or 1 return -/+infinity.
double normal_quantile(double p);

}  // namespace simplexconf

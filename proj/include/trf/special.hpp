#pragma once

namespace trf {

// Modified Bessel function of the second kind, order one, x > 0.
// Power series below x = 2, exponentially scaled Chebyshev expansions
// above; relative accuracy ~1e-14 across the crossover.
double bessel_k1(double x);

// Matern correlation with smoothness eta and range alpha (both > 0):
//   (2^(1-eta)/Gamma(eta)) (h/alpha)^eta K_eta(h/alpha),  value 1 at h = 0.
// eta = 0.5 and eta = 1 use closed/special forms; other eta go through
// std::cyl_bessel_k.
double matern_correlation(double h, double eta, double alpha);

// Whittle covariance kernel 2*phi*alpha0^2 * (h/alpha0) K_1(h/alpha0);
// continuous at h = 0 with value 2*phi*alpha0^2.
double whittle_cov(double h, double phi, double alpha0);

// Standard normal distribution.
double normal_pdf(double x);
double normal_cdf(double x);
double normal_quantile(double p); // p in (0,1)

// Regularized incomplete beta function I_x(a, b).
double inc_beta(double a, double b, double x);

// Student t with nu degrees of freedom; nu = +infinity means standard
// normal.  Quantile takes p in (0,1).
double student_t_pdf(double x, double nu);
double student_t_cdf(double x, double nu);
double student_t_quantile(double p, double nu);

} // namespace trf

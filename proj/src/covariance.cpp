#include "trf/covariance.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "trf/special.hpp"

namespace trf {

namespace {

constexpr double pi = std::numbers::pi;

double harmonic_sum(double omega, const std::vector<double>& coef) {
    double s = 0.0;
    for (std::size_t k = 0; k < coef.size(); ++k) {
        s += coef[k] * std::cos(static_cast<double>(k) * omega);
    }
    return s;
}

} // namespace

void SpaceTimeCovSpec::validate() const {
    if (!(matern.eta > 0.0) || !(matern.range > 0.0) || !(matern.scale > 0.0)) {
        throw std::invalid_argument("SpaceTimeCovSpec: Matern parameters must be positive");
    }
    if (beta < 0.0) throw std::invalid_argument("SpaceTimeCovSpec: beta must be >= 0");
    if (L < 0) throw std::invalid_argument("SpaceTimeCovSpec: L must be >= 0");
    const std::size_t want = static_cast<std::size_t>(L) + 1;
    if (a.size() != want || c.size() != want) {
        throw std::invalid_argument("SpaceTimeCovSpec: a and c must have L+1 entries");
    }
    const double norm = std::hypot(u[0], u[1]);
    if (std::fabs(norm - 1.0) > 1e-9) {
        throw std::invalid_argument("SpaceTimeCovSpec: direction u must be a unit vector");
    }
}

double gamma_fn(double omega, const SpaceTimeCovSpec& spec) {
    return std::exp(harmonic_sum(omega, spec.a));
}

double spectral_density(double omega, const SpaceTimeCovSpec& spec) {
    if (std::fabs(omega) > pi + 1e-12) {
        throw std::invalid_argument("spectral_density: omega outside (-pi, pi]");
    }
    const double sin_half = std::fabs(std::sin(0.5 * omega));
    if (sin_half == 0.0 && spec.beta > 0.0) {
        throw std::invalid_argument("spectral_density: singular frequency omega=0 with beta>0");
    }
    const double long_range = spec.beta > 0.0 ? std::pow(sin_half, -spec.beta) : 1.0;
    return long_range * std::exp(harmonic_sum(omega, spec.c));
}

Matrix cross_spectral_matrix(double omega, const GaugeNetwork& network,
                             const SpaceTimeCovSpec& spec) {
    const double s = spectral_density(omega, spec);
    const double g = gamma_fn(omega, spec);
    const double alpha0 = spec.matern.range * network.d_max;
    const std::size_t p = network.size();
    Matrix f(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        f(i, i) = s;
        for (std::size_t j = i + 1; j < p; ++j) {
            const double rho = alpha0 > 0.0
                ? matern_correlation(network.dist(i, j) * g, spec.matern.eta, alpha0)
                : (network.dist(i, j) == 0.0 ? 1.0 : 0.0);
            f(i, j) = s * rho;
            f(j, i) = f(i, j);
        }
    }
    return f;
}

DiscreteSpectrum build_discrete_spectrum(const SpaceTimeCovSpec& spec,
                                         std::size_t n_embed) {
    if (n_embed < 2) throw std::invalid_argument("build_discrete_spectrum: need n >= 2");
    spec.validate();
    DiscreteSpectrum d;
    d.n = n_embed;
    d.s.resize(n_embed);
    d.gamma.resize(n_embed);

    const double w1 = 2.0 * pi / static_cast<double>(n_embed);
    double total = 0.0;
    for (std::size_t k = 0; k < n_embed; ++k) {
        // Map k to the principal frequency in [0, pi] (S and gamma are even).
        const std::size_t kk = k <= n_embed / 2 ? k : n_embed - k;
        const double w = w1 * static_cast<double>(kk);
        const double w_cap = (kk == 0 && spec.beta > 0.0) ? w1 : w;
        d.s[k] = spectral_density(w_cap, spec);
        d.gamma[k] = gamma_fn(w, spec);
        total += d.s[k];
    }
    // Rescale so the discrete mean of s is exactly 1 => unit variance.
    const double fac = static_cast<double>(n_embed) / total;
    for (auto& v : d.s) v *= fac;

    d.gamma_constant = true;
    for (std::size_t k = 1; k < n_embed; ++k) {
        if (std::fabs(d.gamma[k] - d.gamma[0]) > 1e-14 * std::fabs(d.gamma[0])) {
            d.gamma_constant = false;
            break;
        }
    }
    return d;
}

double spacetime_cov(double dist_km, double t_lag, const SpaceTimeCovSpec& spec,
                     std::size_t n_grid, double d_max) {
    const DiscreteSpectrum d = build_discrete_spectrum(spec, n_grid);
    const double alpha0 = spec.matern.range * d_max;
    const double w1 = 2.0 * pi / static_cast<double>(n_grid);
    double acc = 0.0;
    for (std::size_t k = 0; k < n_grid; ++k) {
        const double rho = alpha0 > 0.0
            ? matern_correlation(dist_km * d.gamma[k], spec.matern.eta, alpha0)
            : (dist_km == 0.0 ? 1.0 : 0.0);
        acc += d.s[k] * rho * std::cos(w1 * static_cast<double>(k) * t_lag);
    }
    return acc / static_cast<double>(n_grid);
}

double mvt_logdensity(const std::vector<double>& y, const TDistSpec& spec) {
    const std::size_t p = y.size();
    if (spec.mu.size() != p || spec.omega.rows() != p || spec.omega.cols() != p) {
        throw std::invalid_argument("mvt_logdensity: dimension mismatch");
    }
    if (!std::isfinite(spec.nu) || !(spec.nu >= 1.0)) {
        throw std::invalid_argument("mvt_logdensity: nu must be finite and >= 1");
    }
    const Matrix l = cholesky(spec.omega); // throws naming the failing pivot
    std::vector<double> diff(p);
    for (std::size_t i = 0; i < p; ++i) diff[i] = y[i] - spec.mu[i];
    const std::vector<double> w = solve_lower(l, diff);
    double q = 0.0;
    for (double v : w) q += v * v;
    double log_det = 0.0;
    for (std::size_t i = 0; i < p; ++i) log_det += std::log(l(i, i));

    const double nu = spec.nu;
    const double pd = static_cast<double>(p);
    return std::lgamma(0.5 * (nu + pd)) - std::lgamma(0.5 * nu) -
           0.5 * pd * std::log(nu * pi) - log_det -
           0.5 * (nu + pd) * std::log1p(q / nu);
}

} // namespace trf

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "trf/gauge.hpp"
#include "trf/matrix.hpp"

namespace trf {

// Matern correlation parameters.  `range` is a fraction of the network's
// maximum pairwise distance (the alpha = alpha0/d_max convention), so specs
// transfer between networks of different physical extent.
struct MaternSpec {
    double eta = 1.0;   // smoothness; eta = 1 is the Whittle member
    double range = 0.5; // alpha, as a fraction of d_max
    double scale = 1.0; // phi
};

// Spectral-in-time space-time covariance
//   K(x,t) = integral S(w) C(|x| gamma(w)) e^{iwt} dw
// with log gamma(w) = sum_k a_k cos(kw) and
// log S(w) = -beta log(sin|w/2|) + sum_k c_k cos(kw).  The phase term is
// identically zero, which makes every cross-spectral matrix real symmetric;
// the direction u is kept only so specs round-trip through config files.
struct SpaceTimeCovSpec {
    MaternSpec matern;
    double beta = 0.0;                 // long-range temporal exponent, >= 0
    int L = 2;                         // harmonic truncation
    std::vector<double> a{0.0, 0.0, 0.0};
    std::vector<double> c{0.0, 0.0, 0.0};
    std::array<double, 2> u{1.0, 0.0}; // unit direction (unused while phase = 0)

    void validate() const; // throws std::invalid_argument on violated invariants
};

struct TDistSpec {
    double nu = 3.0;        // finite for mvt_logdensity
    std::vector<double> mu;
    Matrix omega;           // positive definite scale
};

double gamma_fn(double omega, const SpaceTimeCovSpec& spec);

// S(omega); throws "singular frequency" for omega = 0 with beta > 0 (the
// discrete-spectrum builder below caps that frequency instead).
double spectral_density(double omega, const SpaceTimeCovSpec& spec);

// Per-frequency p x p matrix f_ij = S(omega) * C_corr(d_ij * gamma(omega))
// with Matern range matern.range * d_max in km.  Real symmetric PSD.
Matrix cross_spectral_matrix(double omega, const GaugeNetwork& network,
                             const SpaceTimeCovSpec& spec);

// Discrete spectrum on the length-n_embed Fourier grid w_k = 2*pi*k/n_embed,
// with S(0) capped at the smallest nonzero frequency when beta > 0 and the
// whole vector rescaled so (1/N) sum_k s_k = 1 — i.e. unit marginal variance
// for the synthesized field, which is what lets a cutoff quantile map to a
// marginal probability.
struct DiscreteSpectrum {
    std::size_t n = 0;
    std::vector<double> s;      // rescaled S(w_k), k = 0..n-1
    std::vector<double> gamma;  // gamma(w_k)
    bool gamma_constant = false;
};

DiscreteSpectrum build_discrete_spectrum(const SpaceTimeCovSpec& spec,
                                         std::size_t n_embed);

// K(|x|, t) under the discretized spectrum of length n_grid:
//   (1/N) sum_k s_k * C_corr(|x| gamma_k) * cos(w_k t),
// normalized so K(0,0) = 1.  Pass the synthesizer's embedding length as
// n_grid to compare against simulation output exactly.
double spacetime_cov(double dist_km, double t_lag, const SpaceTimeCovSpec& spec,
                     std::size_t n_grid, double d_max);

// Log density of the multivariate t (finite nu) at y.
double mvt_logdensity(const std::vector<double>& y, const TDistSpec& spec);

} // namespace trf

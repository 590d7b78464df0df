#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "trf/covariance.hpp"
#include "trf/fft.hpp"
#include "trf/gauge.hpp"
#include "trf/matrix.hpp"
#include "trf/rng.hpp"

namespace trf {

enum class FieldKind { gaussian, t };

struct LatentField {
    Matrix y; // sites x timesteps
    FieldKind kind = FieldKind::gaussian;
    double nu = 0.0; // degrees of freedom when kind == t
};

struct SimConfig {
    GaugeNetwork network;
    std::size_t n_steps = 0;
    SpaceTimeCovSpec cov;
    double alpha_u = 0.2;          // scaling-process range
    bool alpha_u_in_steps = false; // false: fraction of n_steps (default); true: steps
    double nu = 3.0;               // finite integer, or +infinity for the GRF
    std::uint64_t seed = 0;
    std::size_t replications = 1;
};

// Fixed substream layout: stream 0 carries Z's spectral draws, streams
// 1..nu carry the X_j series of U(t).  Spatial-field replications use their
// replication index, so any subset can be regenerated independently.
inline constexpr std::uint64_t stream_z = 0;
inline constexpr std::uint64_t stream_x_base = 1;

// Circulant-embedding synthesizer for the p-variate stationary Gaussian
// series Z.  All theta-dependent work (spectrum, per-frequency triangular
// factors) happens in the constructor so one instance can serve many
// replications.  When gamma(w) is constant the spectrum factorizes into a
// single spatial factor times p independent scalar series, which the
// synthesizer detects and exploits; otherwise it factors every frequency.
class GaussianMtsSynthesizer {
  public:
    GaussianMtsSynthesizer(const GaugeNetwork& network,
                           const SpaceTimeCovSpec& cov, std::size_t n_steps);

    std::size_t embedding_length() const { return n_embed_; }
    std::size_t n_steps() const { return n_; }
    std::size_t n_sites() const { return p_; }

    // One replication; all randomness from `rng` in a fixed draw order.
    Matrix draw(RngStream& rng) const;

  private:
    std::size_t p_ = 0, n_ = 0, n_embed_ = 0;
    DiscreteSpectrum spectrum_;
    Fft fft_;
    bool separable_ = false;
    Matrix l_spatial_;            // separable path: factor of the correlation matrix
    std::vector<double> l_freq_;  // general path: packed lower factors, k = 0..N/2
    std::size_t tri_ = 0;         // packed triangle size p(p+1)/2

    void draw_scalar_series(RngStream& rng, const double* s,
                            std::vector<std::complex<double>>& work,
                            double* out) const;
};

// Synthesizer for one unit-variance stationary Gaussian series with Whittle
// correlation M1(h/alpha_u) in time, used to build U(t).  This embedding is
// covariance-specified, so negative embedding eigenvalues can occur; they
// are clipped to zero and the spectrum rescaled to keep the marginal
// variance exactly 1 (preserving the chi-square margin of nu*U^2 exactly;
// the temporal correlation absorbs the clipped mass, reported below).
class ScalingSynthesizer {
  public:
    ScalingSynthesizer(std::size_t n_steps, double alpha_u_steps);

    std::size_t embedding_length() const { return n_embed_; }
    double clipped_mass_fraction() const { return clipped_mass_; }

    // One X_j series of length n_steps.
    std::vector<double> draw_x(RngStream& rng) const;

    // u(t) = sqrt((1/nu) sum_j X_j(t)^2) with X_j from streams
    // stream_x_base + j, j = 0..nu-1.
    std::vector<double> draw_u(std::uint64_t seed, std::uint64_t replication,
                               int nu) const;

  private:
    std::size_t n_ = 0, n_embed_ = 0;
    Fft fft_;
    std::vector<double> s_; // clipped + rescaled embedding eigenvalues
    double clipped_mass_ = 0.0;
};

LatentField simulate_gaussian_mts(const GaugeNetwork& network,
                                  const SpaceTimeCovSpec& cov,
                                  std::size_t n_steps, std::uint64_t seed,
                                  std::uint64_t replication = 0);

std::vector<double> simulate_scaling_process(std::size_t n_steps, int nu,
                                             double alpha_u_steps,
                                             std::uint64_t seed,
                                             std::uint64_t replication = 0);

// Y = Z/U for finite nu; the nu = infinity path returns Z unchanged.
LatentField simulate_trf(const SimConfig& config, std::uint64_t replication = 0);

// Independent purely spatial fields, one per column: Z_rep/U_rep with
// scalar nu*U^2 ~ chi-square(nu) per replication (nu = infinity: Gaussian).
LatentField simulate_spatial_trf(const GaugeNetwork& network,
                                 const MaternSpec& matern, double nu,
                                 std::size_t n_replications, std::uint64_t seed);

// Cutoff quantile: Student-t(nu) for finite nu, standard normal otherwise.
double marginal_cutoff(double p_dry, double nu);

struct CutoffSurface {
    Matrix c; // sites x timesteps
};

OccurrenceField threshold_occurrence(const LatentField& field, double cutoff,
                                     int step_minutes = 15, std::int64_t origin = 0);
OccurrenceField threshold_occurrence(const LatentField& field,
                                     const CutoffSurface& cutoff,
                                     int step_minutes = 15, std::int64_t origin = 0);

// Regular W x H grid of pseudo-sites near the equator with the given
// spacing; reuses the spatial tRF sampler for gridded-field demos.
GaugeNetwork make_grid_network(int width, int height, double spacing_km);

} // namespace trf

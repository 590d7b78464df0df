#include "trf/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "trf/special.hpp"

namespace trf {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;

Matrix spatial_correlation(const GaugeNetwork& network, const MaternSpec& matern,
                           double gamma_scale) {
    const double alpha0 = matern.range * network.d_max;
    const std::size_t p = network.size();
    Matrix r(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        r(i, i) = 1.0;
        for (std::size_t j = i + 1; j < p; ++j) {
            const double rho = alpha0 > 0.0
                ? matern_correlation(network.dist(i, j) * gamma_scale, matern.eta, alpha0)
                : (network.dist(i, j) == 0.0 ? 1.0 : 0.0);
            r(i, j) = rho;
            r(j, i) = rho;
        }
    }
    return r;
}

} // namespace

GaussianMtsSynthesizer::GaussianMtsSynthesizer(const GaugeNetwork& network,
                                               const SpaceTimeCovSpec& cov,
                                               std::size_t n_steps)
    : p_(network.size()),
      n_(n_steps),
      n_embed_(Fft::next_power_of_two(2 * n_steps)),
      spectrum_(build_discrete_spectrum(cov, Fft::next_power_of_two(2 * n_steps))),
      fft_(n_embed_),
      tri_(network.size() * (network.size() + 1) / 2) {
    if (n_steps < 1) throw std::invalid_argument("GaussianMtsSynthesizer: n_steps >= 1 required");

    separable_ = spectrum_.gamma_constant;
    if (separable_) {
        const Matrix r = spatial_correlation(network, cov.matern, spectrum_.gamma[0]);
        l_spatial_ = cholesky_psd(r);
        return;
    }

    // One triangular factor of the correlation part per frequency
    // k = 0..N/2 (conjugate frequencies share the factor).  The spectrum
    // scalar s_k is applied at draw time, so factors stay correlation-sized.
    const std::size_t n_half = n_embed_ / 2;
    l_freq_.assign((n_half + 1) * tri_, 0.0);
    for (std::size_t k = 0; k <= n_half; ++k) {
        const Matrix r = spatial_correlation(network, cov.matern, spectrum_.gamma[k]);
        Matrix l;
        try {
            l = cholesky_psd(r);
        } catch (const std::exception& e) {
            throw std::runtime_error("GaussianMtsSynthesizer: factorization failed at frequency index " +
                                     std::to_string(k) + ": " + e.what());
        }
        double* dst = l_freq_.data() + k * tri_;
        for (std::size_t i = 0; i < p_; ++i) {
            for (std::size_t j = 0; j <= i; ++j) *dst++ = l(i, j);
        }
    }
}

// Fills `out` (length n_) with one real series whose discrete spectrum is
// `s`: b_0 and b_{N/2} are real Gaussians scaled by sqrt(s_k); interior
// coefficients are complex Gaussians scaled by sqrt(s_k/2); Hermitian
// symmetry plus a synthesis FFT and 1/sqrt(N) give the exact circularized
// covariance (1/N) sum_k s_k cos(w_k h).
void GaussianMtsSynthesizer::draw_scalar_series(RngStream& rng, const double* s,
                                                std::vector<std::complex<double>>& work,
                                                double* out) const {
    const std::size_t nn = n_embed_;
    const std::size_t half = nn / 2;
    work[0] = std::sqrt(s[0]) * rng.normal();
    for (std::size_t k = 1; k < half; ++k) {
        const double sc = std::sqrt(s[k]) * inv_sqrt2;
        const double re = sc * rng.normal();
        const double im = sc * rng.normal();
        work[k] = {re, im};
        work[nn - k] = {re, -im};
    }
    work[half] = std::sqrt(s[half]) * rng.normal();

    fft_.transform(work, +1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(nn));
    for (std::size_t t = 0; t < n_; ++t) out[t] = scale * work[t].real();
}

Matrix GaussianMtsSynthesizer::draw(RngStream& rng) const {
    Matrix z(p_, n_);
    std::vector<std::complex<double>> work(n_embed_);

    if (separable_) {
        for (std::size_t i = 0; i < p_; ++i) {
            draw_scalar_series(rng, spectrum_.s.data(), work, z.row(i));
        }
        // Spatial mixing in place: row_i <- sum_{j<=i} L_ij row_j.  Rows are
        // processed top-down in descending order so unmixed rows survive
        // until they are needed.
        for (std::size_t ii = p_; ii-- > 0;) {
            double* zi = z.row(ii);
            const double lii = l_spatial_(ii, ii);
            for (std::size_t t = 0; t < n_; ++t) zi[t] *= lii;
            for (std::size_t j = 0; j < ii; ++j) {
                const double lij = l_spatial_(ii, j);
                if (lij == 0.0) continue;
                const double* zj = z.row(j);
                for (std::size_t t = 0; t < n_; ++t) zi[t] += lij * zj[t];
            }
        }
        return z;
    }

    // General path: mix per frequency with that frequency's factor.
    const std::size_t nn = n_embed_;
    const std::size_t half = nn / 2;
    std::vector<std::complex<double>> freq(p_ * nn);
    std::vector<double> wr(p_), wi(p_);
    for (std::size_t k = 0; k <= half; ++k) {
        const bool edge = (k == 0 || k == half);
        const double sc = edge ? std::sqrt(spectrum_.s[k])
                               : std::sqrt(spectrum_.s[k]) * inv_sqrt2;
        for (std::size_t j = 0; j < p_; ++j) {
            wr[j] = sc * rng.normal();
            wi[j] = edge ? 0.0 : sc * rng.normal();
        }
        const double* l = l_freq_.data() + k * tri_;
        for (std::size_t i = 0; i < p_; ++i) {
            double re = 0.0, im = 0.0;
            const double* li = l + i * (i + 1) / 2;
            for (std::size_t j = 0; j <= i; ++j) {
                re += li[j] * wr[j];
                im += li[j] * wi[j];
            }
            freq[i * nn + k] = {re, im};
            if (!edge) freq[i * nn + (nn - k)] = {re, -im};
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(nn));
    std::vector<std::complex<double>>& site = work;
    for (std::size_t i = 0; i < p_; ++i) {
        std::copy(freq.begin() + static_cast<std::ptrdiff_t>(i * nn),
                  freq.begin() + static_cast<std::ptrdiff_t>((i + 1) * nn), site.begin());
        fft_.transform(site, +1);
        double* zi = z.row(i);
        for (std::size_t t = 0; t < n_; ++t) zi[t] = scale * site[t].real();
    }
    return z;
}

ScalingSynthesizer::ScalingSynthesizer(std::size_t n_steps, double alpha_u_steps)
    : n_(n_steps),
      n_embed_(Fft::next_power_of_two(2 * n_steps)),
      fft_(Fft::next_power_of_two(2 * n_steps)) {
    if (n_steps < 1) throw std::invalid_argument("ScalingSynthesizer: n_steps >= 1 required");
    if (!(alpha_u_steps > 0.0)) {
        throw std::invalid_argument("ScalingSynthesizer: alpha_u must be positive");
    }
    // Embedding eigenvalues = DFT of the circularized Whittle correlation.
    const std::size_t nn = n_embed_;
    std::vector<std::complex<double>> row(nn);
    for (std::size_t k = 0; k < nn; ++k) {
        const std::size_t h = k <= nn / 2 ? k : nn - k;
        row[k] = matern_correlation(static_cast<double>(h), 1.0, alpha_u_steps);
    }
    fft_.transform(row, -1);

    s_.resize(nn);
    double total = 0.0;
    double clipped = 0.0;
    for (std::size_t k = 0; k < nn; ++k) {
        const double lam = row[k].real();
        if (lam < 0.0) {
            clipped -= lam;
            s_[k] = 0.0;
        } else {
            s_[k] = lam;
            total += lam;
        }
    }
    // Rescale so (1/N) sum_k s_k = 1 exactly: the marginal stays standard
    // normal even when clipping removed mass.
    const double fac = static_cast<double>(nn) / total;
    for (auto& v : s_) v *= fac;
    clipped_mass_ = clipped / (clipped + total);
}

std::vector<double> ScalingSynthesizer::draw_x(RngStream& rng) const {
    const std::size_t nn = n_embed_;
    const std::size_t half = nn / 2;
    std::vector<std::complex<double>> work(nn);
    work[0] = std::sqrt(s_[0]) * rng.normal();
    for (std::size_t k = 1; k < half; ++k) {
        const double sc = std::sqrt(s_[k]) * inv_sqrt2;
        const double re = sc * rng.normal();
        const double im = sc * rng.normal();
        work[k] = {re, im};
        work[nn - k] = {re, -im};
    }
    work[half] = std::sqrt(s_[half]) * rng.normal();
    fft_.transform(work, +1);

    std::vector<double> x(n_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(nn));
    for (std::size_t t = 0; t < n_; ++t) x[t] = scale * work[t].real();
    return x;
}

std::vector<double> ScalingSynthesizer::draw_u(std::uint64_t seed,
                                               std::uint64_t replication,
                                               int nu) const {
    if (nu < 1) throw std::invalid_argument("ScalingSynthesizer: nu must be >= 1");
    std::vector<double> usq(n_, 0.0);
    for (int j = 0; j < nu; ++j) {
        RngStream rng(substream_key(seed, replication, stream_x_base + static_cast<std::uint64_t>(j)));
        const std::vector<double> x = draw_x(rng);
        for (std::size_t t = 0; t < n_; ++t) usq[t] += x[t] * x[t];
    }
    const double inv_nu = 1.0 / static_cast<double>(nu);
    for (auto& v : usq) v = std::sqrt(v * inv_nu);
    return usq;
}

LatentField simulate_gaussian_mts(const GaugeNetwork& network,
                                  const SpaceTimeCovSpec& cov,
                                  std::size_t n_steps, std::uint64_t seed,
                                  std::uint64_t replication) {
    const GaussianMtsSynthesizer synth(network, cov, n_steps);
    RngStream rng(substream_key(seed, replication, stream_z));
    return LatentField{synth.draw(rng), FieldKind::gaussian,
                       std::numeric_limits<double>::infinity()};
}

std::vector<double> simulate_scaling_process(std::size_t n_steps, int nu,
                                             double alpha_u_steps,
                                             std::uint64_t seed,
                                             std::uint64_t replication) {
    const ScalingSynthesizer synth(n_steps, alpha_u_steps);
    return synth.draw_u(seed, replication, nu);
}

namespace {

double resolve_nu(double nu) {
    if (std::isinf(nu)) return nu;
    if (!(nu >= 1.0) || nu != std::floor(nu)) {
        throw std::invalid_argument("nu must be a finite integer >= 1 or infinity");
    }
    return nu;
}

} // namespace

LatentField simulate_trf(const SimConfig& config, std::uint64_t replication) {
    const double nu = resolve_nu(config.nu);
    LatentField z = simulate_gaussian_mts(config.network, config.cov,
                                          config.n_steps, config.seed, replication);
    if (std::isinf(nu)) return z;

    const double alpha_u_steps = config.alpha_u_in_steps
        ? config.alpha_u
        : config.alpha_u * static_cast<double>(config.n_steps);
    const ScalingSynthesizer scaling(config.n_steps, alpha_u_steps);
    const std::vector<double> u =
        scaling.draw_u(config.seed, replication, static_cast<int>(nu));

    LatentField y;
    y.kind = FieldKind::t;
    y.nu = nu;
    y.y = std::move(z.y);
    for (std::size_t i = 0; i < y.y.rows(); ++i) {
        double* row = y.y.row(i);
        for (std::size_t t = 0; t < y.y.cols(); ++t) row[t] /= u[t];
    }
    return y;
}

LatentField simulate_spatial_trf(const GaugeNetwork& network,
                                 const MaternSpec& matern, double nu_in,
                                 std::size_t n_replications, std::uint64_t seed) {
    const double nu = resolve_nu(nu_in);
    const Matrix l = cholesky_psd(spatial_correlation(network, matern, 1.0));
    const std::size_t p = network.size();

    LatentField out;
    out.kind = std::isinf(nu) ? FieldKind::gaussian : FieldKind::t;
    out.nu = nu;
    out.y = Matrix(p, n_replications);
    std::vector<double> xi(p);
    for (std::size_t rep = 0; rep < n_replications; ++rep) {
        RngStream rng(substream_key(seed, rep, stream_z));
        for (std::size_t j = 0; j < p; ++j) xi[j] = rng.normal();
        double inv_u = 1.0;
        if (!std::isinf(nu)) {
            double chisq = 0.0;
            for (int j = 0; j < static_cast<int>(nu); ++j) {
                const double g = rng.normal();
                chisq += g * g;
            }
            inv_u = std::sqrt(nu / chisq);
        }
        for (std::size_t i = 0; i < p; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j <= i; ++j) acc += l(i, j) * xi[j];
            out.y(i, rep) = acc * inv_u;
        }
    }
    return out;
}

double marginal_cutoff(double p_dry, double nu) {
    if (!(p_dry > 0.0) || !(p_dry < 1.0)) {
        throw std::invalid_argument("marginal_cutoff: p_dry must lie in (0,1)");
    }
    return student_t_quantile(p_dry, nu);
}

namespace {

OccurrenceField make_occurrence_shell(const LatentField& field, int step_minutes,
                                      std::int64_t origin) {
    OccurrenceField occ;
    occ.n_sites = field.y.rows();
    occ.n_steps = field.y.cols();
    occ.step_minutes = step_minutes;
    occ.origin = origin;
    occ.occ.resize(occ.n_sites * occ.n_steps);
    return occ;
}

} // namespace

OccurrenceField threshold_occurrence(const LatentField& field, double cutoff,
                                     int step_minutes, std::int64_t origin) {
    OccurrenceField occ = make_occurrence_shell(field, step_minutes, origin);
    for (std::size_t i = 0; i < occ.n_sites; ++i) {
        const double* row = field.y.row(i);
        for (std::size_t t = 0; t < occ.n_steps; ++t) {
            occ.at(i, t) = row[t] > cutoff ? 1 : 0;
        }
    }
    return occ;
}

OccurrenceField threshold_occurrence(const LatentField& field,
                                     const CutoffSurface& cutoff,
                                     int step_minutes, std::int64_t origin) {
    if (cutoff.c.rows() != field.y.rows() || cutoff.c.cols() != field.y.cols()) {
        throw std::invalid_argument("threshold_occurrence: cutoff surface dimensions mismatch field");
    }
    OccurrenceField occ = make_occurrence_shell(field, step_minutes, origin);
    for (std::size_t i = 0; i < occ.n_sites; ++i) {
        const double* row = field.y.row(i);
        const double* crow = cutoff.c.row(i);
        for (std::size_t t = 0; t < occ.n_steps; ++t) {
            occ.at(i, t) = row[t] > crow[t] ? 1 : 0;
        }
    }
    return occ;
}

GaugeNetwork make_grid_network(int width, int height, double spacing_km) {
    if (width < 1 || height < 1 || !(spacing_km > 0.0)) {
        throw std::invalid_argument("make_grid_network: invalid grid shape");
    }
    if (width * height < 2) {
        throw std::invalid_argument("make_grid_network: need at least 2 grid points");
    }
    // Near the equator one degree is ~111.195 km in both directions.
    const double deg_per_km = 1.0 / 111.19492664455873;
    std::vector<Site> sites;
    sites.reserve(static_cast<std::size_t>(width) * height);
    for (int yy = 0; yy < height; ++yy) {
        for (int xx = 0; xx < width; ++xx) {
            sites.push_back({"g" + std::to_string(xx) + "x" + std::to_string(yy),
                             yy * spacing_km * deg_per_km,
                             xx * spacing_km * deg_per_km});
        }
    }
    return network_from_coords(sites);
}

} // namespace trf

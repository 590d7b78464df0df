#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "trf/covariance.hpp"
#include "trf/gauge.hpp"
#include "trf/matrix.hpp"
#include "trf/special.hpp"

using namespace trf;

namespace {

SpaceTimeCovSpec oracle_spec() {
    SpaceTimeCovSpec s;
    s.matern.eta = 1.0;
    s.matern.range = 0.5;
    s.beta = 0.4;
    s.L = 2;
    s.a = {0.0, 0.3, 0.0};
    s.c = {0.2, -0.1, 0.05};
    return s;
}

TDistSpec tspec(double nu, std::vector<double> mu, Matrix omega) {
    TDistSpec t;
    t.nu = nu;
    t.mu = std::move(mu);
    t.omega = std::move(omega);
    return t;
}

} // namespace

TEST_CASE("spectral density and gamma function") {
    SpaceTimeCovSpec s;
    s.beta = 0.4;
    s.a = {0.0, 0.0, 0.0};
    s.c = {0.0, 0.0, 0.0};
    // plain power law: S(pi/2) = sin(pi/4)^(-0.4) = 2^0.2
    CHECK(spectral_density(M_PI / 2.0, s) == doctest::Approx(std::pow(2.0, 0.2)).epsilon(1e-13));
    CHECK(spectral_density(M_PI, s) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(spectral_density(0.0, s), std::invalid_argument); // singular at 0 with beta>0

    s.beta = 0.0;
    CHECK(spectral_density(0.0, s) == doctest::Approx(1.0).epsilon(1e-13));

    SpaceTimeCovSpec g = oracle_spec();
    CHECK(gamma_fn(0.0, g) == doctest::Approx(std::exp(0.3)).epsilon(1e-13));
    CHECK(gamma_fn(M_PI, g) == doctest::Approx(std::exp(-0.3)).epsilon(1e-13));
    CHECK(gamma_fn(M_PI / 2.0, g) == doctest::Approx(1.0).epsilon(1e-13));
    // even in omega
    CHECK(gamma_fn(1.1, g) == doctest::Approx(gamma_fn(-1.1, g)).epsilon(1e-14));
}

TEST_CASE("discrete spectrum: cap, principal frequencies, unit-variance rescale") {
    // expected s_k computed independently from the defining formulas at N=8
    const SpaceTimeCovSpec s = oracle_spec();
    const DiscreteSpectrum d = build_discrete_spectrum(s, 8);
    REQUIRE(d.s.size() == 8);
    const double want[8] = {1.132226131991741, 1.132226131991741, 0.9042105519444088,
                            0.9167299385527423, 0.9614406230304745, 0.9167299385527423,
                            0.9042105519444088, 1.132226131991741};
    for (int k = 0; k < 8; ++k)
        CHECK(d.s[k] == doctest::Approx(want[k]).epsilon(1e-12));
    // zero-frequency cap equals the first nonzero frequency's value
    CHECK(d.s[0] == doctest::Approx(d.s[1]).epsilon(1e-14));
    // mean exactly one after the rescale
    double mean = 0.0;
    for (double v : d.s) mean += v;
    CHECK(mean / 8.0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(d.gamma_constant);

    SpaceTimeCovSpec flat = oracle_spec();
    flat.a = {0.0, 0.0, 0.0};
    CHECK(build_discrete_spectrum(flat, 8).gamma_constant);

    SpaceTimeCovSpec scaled = oracle_spec();
    // a constant shift of log S cancels in the rescale
    scaled.c[0] += 3.7;
    const DiscreteSpectrum d2 = build_discrete_spectrum(scaled, 8);
    for (int k = 0; k < 8; ++k)
        CHECK(d2.s[k] == doctest::Approx(d.s[k]).epsilon(1e-12));
}

TEST_CASE("space-time covariance against an independent evaluation") {
    const SpaceTimeCovSpec s = oracle_spec();
    const double d_max = 10.0;
    struct Ref { double d, t, k; };
    // frozen values of (1/N) sum_k s_k M((d gamma_k)/(range d_max)) cos(w_k t), N = 8
    const Ref refs[] = {
        {0.0, 0.0, 1.0},
        {0.0, 1.0, 0.05944289354530929},
        {3.0, 0.0, 0.7702628983296951},
        {3.0, 2.0, 0.02283072939732774},
        {7.5, 1.0, -0.04876002732575902},
        {10.0, 3.0, -0.004948943035291239},
    };
    for (const auto& r : refs)
        CHECK(spacetime_cov(r.d, r.t, s, 8, d_max) ==
              doctest::Approx(r.k).epsilon(1e-12).scale(1.0));
}

TEST_CASE("unit variance holds across parameters") {
    for (double beta : {0.0, 0.3, 0.85}) {
        SpaceTimeCovSpec s;
        s.beta = beta;
        s.c = {0.1, 0.2, -0.3};
        s.a = {0.0, -0.2, 0.1};
        CHECK(spacetime_cov(0.0, 0.0, s, 64, 5.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("covariance spec validation") {
    SpaceTimeCovSpec s = oracle_spec();
    CHECK_NOTHROW(s.validate());
    s.a = {0.0, 0.0}; // wrong length for L = 2
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = oracle_spec();
    s.matern.range = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = oracle_spec();
    s.beta = -0.1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = oracle_spec();
    s.matern.eta = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("cross-spectral matrix is a valid covariance") {
    std::vector<Site> sites = {
        {"a", 0.0, 0.0}, {"b", 0.0, 0.05}, {"c", 0.04, 0.02}, {"d", 0.01, 0.08}};
    const GaugeNetwork net = network_from_coords(sites);
    const SpaceTimeCovSpec s = oracle_spec();
    for (double w : {0.2, 1.0, 2.5, M_PI}) {
        const Matrix m = cross_spectral_matrix(w, net, s);
        REQUIRE(m.rows() == 4);
        const double sw = spectral_density(w, s);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(m(i, i) == doctest::Approx(sw).epsilon(1e-13));
            for (std::size_t j = 0; j < i; ++j) {
                CHECK(m(i, j) == doctest::Approx(m(j, i)).epsilon(1e-14));
                CHECK(std::abs(m(i, j)) < m(i, i)); // correlations below 1
            }
        }
        CHECK_NOTHROW(cholesky_psd(m)); // positive semi-definite
    }
}

TEST_CASE("multivariate t log density") {
    Matrix sigma(2, 2);
    sigma(0, 0) = 1.0; sigma(0, 1) = 0.5; sigma(1, 0) = 0.5; sigma(1, 1) = 1.0;
    CHECK(mvt_logdensity({0.3, -0.2}, tspec(4.0, {0.0, 0.0}, sigma)) ==
          doctest::Approx(-1.878261914569386).epsilon(1e-12));

    Matrix sigma2(2, 2);
    sigma2(0, 0) = 2.0; sigma2(0, 1) = 0.3; sigma2(1, 0) = 0.3; sigma2(1, 1) = 0.5;
    CHECK(mvt_logdensity({1.0, 0.5}, tspec(7.0, {0.2, -0.1}, sigma2)) ==
          doctest::Approx(-2.292872745395538).epsilon(1e-12));

    // 1-d, nu=1 is the Cauchy density
    Matrix one(1, 1);
    one(0, 0) = 1.0;
    const double x = 0.7;
    CHECK(mvt_logdensity({x}, tspec(1.0, {0.0}, one)) ==
          doctest::Approx(std::log(1.0 / (M_PI * (1.0 + x * x)))).epsilon(1e-13));

    // large nu approaches the Gaussian log density
    const double g = -0.5 * std::log(2.0 * M_PI) - 0.5 * x * x;
    CHECK(mvt_logdensity({x}, tspec(1e6, {0.0}, one)) == doctest::Approx(g).epsilon(1e-4));

    // matches a normalizing 2-d numerical integral near 1 (Simpson over a
    // wide box; the nu=4 tails left outside contribute < 6e-3)
    double total = 0.0;
    const double lim = 14.0;
    const int n = 280;
    const double h = 2.0 * lim / n;
    const TDistSpec ts = tspec(4.0, {0.0, 0.0}, sigma);
    for (int i = 0; i <= n; ++i) {
        const double wi = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        for (int j = 0; j <= n; ++j) {
            const double wj = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            const double xi = -lim + i * h, yj = -lim + j * h;
            total += wi * wj * std::exp(mvt_logdensity({xi, yj}, ts));
        }
    }
    total *= h * h / 9.0;
    CHECK(total == doctest::Approx(1.0).epsilon(7e-3));

    CHECK_THROWS_AS(mvt_logdensity({0.0}, tspec(4.0, {0.0, 0.0}, sigma)),
                    std::invalid_argument);
    CHECK_THROWS_AS(mvt_logdensity({0.0, 0.0}, tspec(0.5, {0.0, 0.0}, sigma)),
                    std::invalid_argument);
}

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "trf/special.hpp"

using namespace trf;

namespace {

// Independent K1 evaluation through the integral representation
//   K1(x) = int_0^inf exp(-x cosh t) cosh t dt,
// composite Simpson on [0, T] with T far past the point where the
// integrand underflows.
double k1_integral(double x) {
    const double hi = 30.0 / std::max(x, 0.2);
    const int n = 400000; // even
    const double h = hi / n;
    auto f = [x](double t) {
        const double c = std::cosh(t);
        const double e = -x * c;
        return e < -700.0 ? 0.0 : std::exp(e) * c;
    };
    double acc = f(0.0) + f(hi);
    for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

} // namespace

TEST_CASE("bessel k1 against reference values") {
    struct Ref { double x, k1; };
    const Ref refs[] = {
        {0.1, 9.8538447808706056},
        {0.5, 1.6564411200033009},
        {1.0, 0.60190723019723457},
        {2.0, 0.13986588181652243},   // series side of the split
        {2.5, 0.073890816347747064},  // Chebyshev side
        {5.0, 0.0040446134454521642},
        {10.0, 1.8648773453825585e-5},
        {50.0, 3.4441022267175556e-23},
    };
    for (const auto& r : refs)
        CHECK(bessel_k1(r.x) == doctest::Approx(r.k1).epsilon(5e-10));
}

TEST_CASE("bessel k1 against the integral representation") {
    for (double x : {0.5, 1.0, 2.0, 2.1, 4.0, 6.0})
        CHECK(bessel_k1(x) == doctest::Approx(k1_integral(x)).epsilon(1e-8));
}

TEST_CASE("bessel k1 domain and limits") {
    CHECK_THROWS_AS(bessel_k1(0.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_k1(-1.0), std::invalid_argument);
    CHECK(bessel_k1(800.0) == 0.0); // underflow cutoff
    // x K1(x) -> 1 as x -> 0
    CHECK(1e-6 * bessel_k1(1e-6) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("matern correlation reference values") {
    // M_eta(u) = 2^(1-eta)/Gamma(eta) u^eta K_eta(u), evaluated at u = h/alpha0
    CHECK(matern_correlation(0.5, 1.0, 1.0) == doctest::Approx(0.82822056000165045).epsilon(1e-10));
    CHECK(matern_correlation(1.0, 1.0, 1.0) == doctest::Approx(0.60190723019723457).epsilon(1e-10));
    CHECK(matern_correlation(2.0, 1.0, 1.0) == doctest::Approx(0.27973176363304485).epsilon(1e-10));
    CHECK(matern_correlation(1.0, 0.5, 1.0) == doctest::Approx(0.36787944117144232).epsilon(1e-10));
    CHECK(matern_correlation(0.7, 1.5, 1.0) == doctest::Approx(0.84419501644539619).epsilon(1e-10));
    CHECK(matern_correlation(1.3, 2.5, 1.0) == doctest::Approx(0.78034936738738941).epsilon(1e-10));

    // range scaling: only h/alpha0 matters
    CHECK(matern_correlation(3.0, 1.0, 6.0) ==
          doctest::Approx(matern_correlation(0.5, 1.0, 1.0)).epsilon(1e-14));

    CHECK(matern_correlation(0.0, 1.0, 1.0) == 1.0);
    CHECK(matern_correlation(1.0, 0.5, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(matern_correlation(1.0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(matern_correlation(1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(matern_correlation(-1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("normal cdf and pdf") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(-1.0) == doctest::Approx(0.1586552539314571).epsilon(1e-14));
    CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-14));
    CHECK(normal_cdf(-1.0) + normal_cdf(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-15));
}

TEST_CASE("normal quantile reference values") {
    struct Ref { double p, q; };
    const Ref refs[] = {
        {0.001, -3.0902323061678135},
        {0.01, -2.3263478740408411},
        {0.025, -1.9599639845400542},
        {0.3, -0.52440051270804082},
        {0.7, 0.52440051270804066},
        {0.975, 1.9599639845400539},
        {0.99, 2.3263478740408408},
        {0.999, 3.0902323061678133},
        {1e-9, -5.9978070150076869},
        {0.9975, 2.807033768343811},
    };
    for (const auto& r : refs)
        CHECK(normal_quantile(r.p) == doctest::Approx(r.q).epsilon(1e-12));
    CHECK(normal_quantile(0.5) == 0.0);

    // cdf(quantile(p)) == p across the open interval
    for (double p = 0.0005; p < 1.0; p += 0.0421)
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));

    CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("regularized incomplete beta") {
    CHECK(inc_beta(0.5, 0.5, 0.3) == doctest::Approx(0.36901011956554538).epsilon(1e-12));
    CHECK(inc_beta(2.0, 3.0, 0.4) == doctest::Approx(0.52480000000000004).epsilon(1e-12));
    CHECK(inc_beta(1.5, 0.5, 0.9) == doctest::Approx(0.60418130359059219).epsilon(1e-12));
    CHECK(inc_beta(5.0, 1.0, 0.8) == doctest::Approx(0.32768000000000009).epsilon(1e-12));
    CHECK(inc_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(inc_beta(2.0, 3.0, 1.0) == 1.0);
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    for (double x : {0.1, 0.35, 0.62, 0.93})
        CHECK(inc_beta(1.7, 2.4, x) ==
              doctest::Approx(1.0 - inc_beta(2.4, 1.7, 1.0 - x)).epsilon(1e-12));
}

TEST_CASE("student t cdf reference values") {
    CHECK(student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-13)); // Cauchy
    CHECK(student_t_cdf(2.0, 3.0) == doctest::Approx(0.93033701572057841).epsilon(1e-13));
    CHECK(student_t_cdf(-1.5, 3.0) == doctest::Approx(0.11529193262241153).epsilon(1e-13));
    CHECK(student_t_cdf(0.5, 7.0) == doctest::Approx(0.68379643215535789).epsilon(1e-13));
    CHECK(student_t_cdf(3.0, 2.0) == doctest::Approx(0.95226701686664543).epsilon(1e-13));
    CHECK(student_t_cdf(0.0, 5.0) == doctest::Approx(0.5).epsilon(1e-15));
    // symmetry
    CHECK(student_t_cdf(1.2, 4.0) + student_t_cdf(-1.2, 4.0) == doctest::Approx(1.0).epsilon(1e-13));
    // infinite df falls back to the normal
    CHECK(student_t_cdf(1.0, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(normal_cdf(1.0)).epsilon(1e-14));
}

TEST_CASE("student t quantile reference values") {
    CHECK(student_t_quantile(0.975, 1.0) == doctest::Approx(12.7062047364321).epsilon(1e-10));
    CHECK(student_t_quantile(0.975, 3.0) == doctest::Approx(3.182446305284263).epsilon(1e-10));
    CHECK(student_t_quantile(0.9, 3.0) == doctest::Approx(1.63774435369621).epsilon(1e-10));
    CHECK(student_t_quantile(0.99, 5.0) == doctest::Approx(3.364929998907275).epsilon(1e-10));
    CHECK(student_t_quantile(0.975, 7.0) == doctest::Approx(2.364624251592784).epsilon(1e-10));
    CHECK(student_t_quantile(0.6, 2.0) == doctest::Approx(0.2886751345948128).epsilon(1e-10));
    CHECK(student_t_quantile(0.5, 9.0) == 0.0);
    CHECK(student_t_quantile(0.975, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(1.9599639845400539).epsilon(1e-12));

    for (double nu : {1.0, 2.0, 3.0, 7.0, 30.0})
        for (double p : {0.01, 0.2, 0.5, 0.8, 0.99})
            CHECK(student_t_cdf(student_t_quantile(p, nu), nu) ==
                  doctest::Approx(p).epsilon(1e-10));

    // large df approaches the normal
    CHECK(student_t_quantile(0.975, 1e6) ==
          doctest::Approx(normal_quantile(0.975)).epsilon(1e-5));

    CHECK_THROWS_AS(student_t_quantile(0.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(student_t_quantile(0.975, 0.0), std::invalid_argument);
}

TEST_CASE("student t pdf integrates to its cdf") {
    // trapezoid integration of the density reproduces cdf differences
    const double nu = 3.0;
    const double lo = -4.0, hi = 1.5;
    const int n = 20000;
    const double h = (hi - lo) / n;
    double acc = 0.5 * (student_t_pdf(lo, nu) + student_t_pdf(hi, nu));
    for (int i = 1; i < n; ++i) acc += student_t_pdf(lo + i * h, nu);
    acc *= h;
    CHECK(acc == doctest::Approx(student_t_cdf(hi, nu) - student_t_cdf(lo, nu)).epsilon(1e-8));
}

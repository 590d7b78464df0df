#include "trf/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace trf {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double euler_gamma = 0.57721566490153286060651209008240;

// Clenshaw evaluation of a Chebyshev series on [-1, 1].
double csevl(double x, const double* cs, int n) {
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    const double twox = 2.0 * x;
    for (int i = n - 1; i >= 0; --i) {
        b2 = b1;
        b1 = b0;
        b0 = twox * b1 - b2 + cs[i];
    }
    return 0.5 * (b0 - b2);
}

// Chebyshev coefficients for exp(x)*sqrt(x)*K1(x) - 1.25, from the SLATEC
// FNLIB AK1/AK12 series, truncated at double-precision term counts.
const double ak1cs[18] = {
    0.27443134069738829695257666227266,
    0.07571989953199367817089237814929,
    -0.0014410515564754061229853116175625,
    6.6501169551257479394251385477036e-5,
    -4.3699847095201407660580845089167e-6,
    3.5402774997630526799417139008534e-7,
    -3.3111637792932920208982688245704e-8,
    3.4459775819010534532311499770992e-9,
    -3.8989323474754271048981937492758e-10,
    4.7208197504658356400947449339005e-11,
    -6.047835662875356234537359156289e-12,
    8.1284948748658747888193837985663e-13,
    -1.1386945747147891428923915951042e-13,
    1.654035840846228232597294820509e-14,
    -2.4809025677068848221516010440533e-15,
    3.8292378907024096948429227299157e-16,
    -6.0647341040012418187768210377386e-17,
    9.8324256232648616038194004650666e-18,
};
const double ak12cs[14] = {
    0.06379308343739001036600488534102,
    0.02832887813049720935835030284708,
    -2.475370673905250345414545566732e-4,
    5.771972451607248820470976625763e-6,
    -2.068939219536548302745533196552e-7,
    9.739983441381804180309213097887e-9,
    -5.585336140380624984688895511129e-10,
    3.732996634046185240221212854731e-11,
    -2.825051961023225445135065754928e-12,
    2.372019002484144173643496955486e-13,
    -2.176677387991753979268301667938e-14,
    2.157914161616032453939562689706e-15,
    -2.290196930718269275991551338154e-16,
    2.582885729823274961919939565226e-17,
};

// K1 on (0, 2] by its defining power series,
//   K1(x) = ln(x/2) I1(x) + 1/x - (x/4) sum_k [psi(k+1)+psi(k+2)] q^k/(k!(k+1)!)
// with q = x^2/4.  The terms decay faster than 1/(k!)^2, so a handful of
// terms reach full double precision at the crossover.
double k1_series(double x) {
    const double q = 0.25 * x * x;

    double i1 = 0.0;       // I1(x)/(x/2) accumulated below
    double psi_sum = 0.0;  // sum with digamma weights
    double term = 1.0;     // q^k/(k!(k+1)!)
    double psi1 = -euler_gamma;          // psi(k+1)
    double psi2 = 1.0 - euler_gamma;     // psi(k+2)
    for (int k = 0;; ++k) {
        i1 += term;
        psi_sum += (psi1 + psi2) * term;
        const double next = term * q / ((k + 1.0) * (k + 2.0));
        if (next < 1e-18 * (std::fabs(i1) + 1.0) && k > 2) break;
        term = next;
        psi1 += 1.0 / (k + 1.0);
        psi2 += 1.0 / (k + 2.0);
    }
    i1 *= 0.5 * x;
    return std::log(0.5 * x) * i1 + 1.0 / x - 0.25 * x * psi_sum;
}

} // namespace

double bessel_k1(double x) {
    if (!(x > 0.0)) {
        throw std::invalid_argument("bessel_k1: argument must be positive, got " +
                                    std::to_string(x));
    }
    if (x <= 2.0) return k1_series(x);
    double scaled;
    if (x <= 8.0) {
        scaled = (csevl((16.0 / x - 5.0) / 3.0, ak1cs, 18) + 1.25) / std::sqrt(x);
    } else {
        scaled = (csevl(16.0 / x - 1.0, ak12cs, 14) + 1.25) / std::sqrt(x);
    }
    if (x > 700.0) return 0.0; // exp(-x) underflows; K1 is zero to double precision
    return std::exp(-x) * scaled;
}

double matern_correlation(double h, double eta, double alpha) {
    if (h < 0.0) throw std::invalid_argument("matern_correlation: negative distance");
    if (!(eta > 0.0) || !(alpha > 0.0)) {
        throw std::invalid_argument("matern_correlation: eta and alpha must be positive");
    }
    if (h == 0.0) return 1.0;
    const double x = h / alpha;
    if (eta == 1.0) return x * bessel_k1(x);
    if (eta == 0.5) return std::exp(-x);
    if (x > 700.0) return 0.0;
    return std::exp((1.0 - eta) * std::numbers::ln2_v<double> - std::lgamma(eta) +
                    eta * std::log(x)) *
           std::cyl_bessel_k(eta, x);
}

double whittle_cov(double h, double phi, double alpha0) {
    if (!(phi > 0.0) || !(alpha0 > 0.0)) {
        throw std::invalid_argument("whittle_cov: phi and alpha0 must be positive");
    }
    return 2.0 * phi * alpha0 * alpha0 * matern_correlation(h, 1.0, alpha0);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * pi);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2_v<double>);
}

double normal_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
    }
    // Acklam's rational approximation, then one Halley step against erfc.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) return h;
    }
    throw std::runtime_error("inc_beta: continued fraction failed to converge");
}

} // namespace

double inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("inc_beta: a and b must be positive");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                                  std::lgamma(b) + a * std::log(x) +
                                  b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_pdf(double x, double nu) {
    if (std::isinf(nu)) return normal_pdf(x);
    if (!(nu > 0.0)) throw std::invalid_argument("student_t_pdf: nu must be positive");
    const double lg = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                      0.5 * std::log(nu * pi);
    return std::exp(lg - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

double student_t_cdf(double x, double nu) {
    if (std::isinf(nu)) return normal_cdf(x);
    if (!(nu > 0.0)) throw std::invalid_argument("student_t_cdf: nu must be positive");
    if (x == 0.0) return 0.5;
    const double w = nu / (nu + x * x);
    const double half_tail = 0.5 * inc_beta(0.5 * nu, 0.5, w);
    return x > 0.0 ? 1.0 - half_tail : half_tail;
}

double student_t_quantile(double p, double nu) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::invalid_argument("student_t_quantile: p must lie in (0,1)");
    }
    if (std::isinf(nu)) return normal_quantile(p);
    if (!(nu > 0.0)) throw std::invalid_argument("student_t_quantile: nu must be positive");
    if (nu == 1.0) return std::tan(pi * (p - 0.5)); // Cauchy closed form
    if (p == 0.5) return 0.0;

    // Expanding bracket, bisection to high precision, Newton polish.
    double lo = -1.0, hi = 1.0;
    while (student_t_cdf(lo, nu) > p) lo *= 2.0;
    while (student_t_cdf(hi, nu) < p) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, nu) < p) lo = mid;
        else hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 2; ++it) {
        const double f = student_t_cdf(x, nu) - p;
        const double g = student_t_pdf(x, nu);
        if (g > 0.0) x -= f / g;
    }
    return x;
}

} // namespace trf

#include "trf/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace trf {

namespace {

// Reflect a coordinate into [0,1] (folding; terminates for any finite x).
double reflect_unit(double x, bool& reflected) {
    while (x < 0.0 || x > 1.0) {
        reflected = true;
        if (x < 0.0) x = -x;
        if (x > 1.0) x = 2.0 - x;
    }
    return x;
}

} // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0,
                             const NelderMeadOptions& opt) {
    const std::size_t d = x0.size();
    if (d == 0) throw std::invalid_argument("nelder_mead: empty start point");

    NelderMeadResult res;
    auto eval = [&](std::vector<double>& x) {
        bool reflected = false;
        for (auto& v : x) v = reflect_unit(v, reflected);
        if (reflected) ++res.reflections_into_bounds;
        ++res.evals;
        return f(x);
    };

    // Initial simplex: x0 plus a step along each axis (flipped when the
    // step would leave the box).
    std::vector<std::vector<double>> pts(d + 1, x0);
    std::vector<double> fv(d + 1);
    for (std::size_t i = 0; i < d; ++i) {
        double step = opt.init_step;
        if (x0[i] + step > 1.0) step = -step;
        pts[i + 1][i] += step;
    }
    for (std::size_t i = 0; i <= d; ++i) fv[i] = eval(pts[i]);

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    std::vector<std::size_t> order(d + 1);

    while (res.evals < opt.max_evals) {
        for (std::size_t i = 0; i <= d; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });

        double diameter = 0.0;
        for (std::size_t i = 1; i <= d; ++i) {
            for (std::size_t k = 0; k < d; ++k) {
                diameter = std::max(diameter,
                                    std::fabs(pts[order[i]][k] - pts[order[0]][k]));
            }
        }
        if (diameter < opt.diameter_tol) {
            res.converged = true;
            break;
        }

        const std::size_t best = order[0], worst = order[d], second = order[d - 1];
        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < d; ++k) centroid[k] += pts[i][k];
        }
        for (auto& v : centroid) v /= static_cast<double>(d);

        std::vector<double> xr(d);
        for (std::size_t k = 0; k < d; ++k) {
            xr[k] = centroid[k] + alpha * (centroid[k] - pts[worst][k]);
        }
        const double fr = eval(xr);

        if (fr < fv[best]) {
            std::vector<double> xe(d);
            for (std::size_t k = 0; k < d; ++k) {
                xe[k] = centroid[k] + gamma * (xr[k] - centroid[k]);
            }
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = std::move(xe);
                fv[worst] = fe;
            } else {
                pts[worst] = std::move(xr);
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            pts[worst] = std::move(xr);
            fv[worst] = fr;
        } else {
            std::vector<double> xc(d);
            const bool outside = fr < fv[worst];
            const std::vector<double>& toward = outside ? xr : pts[worst];
            for (std::size_t k = 0; k < d; ++k) {
                xc[k] = centroid[k] + rho * (toward[k] - centroid[k]);
            }
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[worst])) {
                pts[worst] = std::move(xc);
                fv[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < d; ++k) {
                        pts[i][k] = pts[best][k] + sigma * (pts[i][k] - pts[best][k]);
                    }
                    fv[i] = eval(pts[i]);
                    if (res.evals >= opt.max_evals) break;
                }
            }
        }
    }

    std::size_t arg = 0;
    for (std::size_t i = 1; i <= d; ++i) {
        if (fv[i] < fv[arg]) arg = i;
    }
    res.x = pts[arg];
    res.fx = fv[arg];
    return res;
}

GoldenResult golden_minimize(const std::function<double(double)>& f, double lo,
                             double hi, double x_tol, int max_evals) {
    if (!(hi > lo)) throw std::invalid_argument("golden_minimize: need hi > lo");
    const double inv_phi = 0.6180339887498949;
    GoldenResult res;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    res.evals = 2;
    while (b - a > x_tol && res.evals < max_evals) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
        ++res.evals;
    }
    if (f1 < f2) {
        res.x = x1;
        res.fx = f1;
    } else {
        res.x = x2;
        res.fx = f2;
    }
    return res;
}

} // namespace trf

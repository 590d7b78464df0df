#include "trf/seasonal_cutoff.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "trf/special.hpp"
#include "trf/timeutil.hpp"

namespace trf {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Grouped sufficient statistics: trials and wet counts per (site, hour).
struct GroupedCounts {
    std::size_t p = 0;
    // indexed [site][hour-1]
    std::vector<std::array<double, 24>> trials;
    std::vector<std::array<double, 24>> wet;
};

GroupedCounts group_by_hour(const OccurrenceField& occ) {
    GroupedCounts g;
    g.p = occ.n_sites;
    g.trials.assign(g.p, {});
    g.wet.assign(g.p, {});
    const std::int64_t step_sec = std::int64_t{60} * occ.step_minutes;
    for (std::size_t t = 0; t < occ.n_steps; ++t) {
        const int hour = hour_of_day(occ.origin + static_cast<std::int64_t>(t) * step_sec);
        for (std::size_t i = 0; i < occ.n_sites; ++i) {
            g.trials[i][hour - 1] += 1.0;
            g.wet[i][hour - 1] += occ.at(i, t);
        }
    }
    return g;
}

double inv_logit(double eta) {
    // Numerically symmetric logistic.
    if (eta >= 0.0) {
        const double e = std::exp(-eta);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

// Linear predictor for (site, hour) under packed coefficients.
double predictor(const std::vector<double>& coef, std::size_t p, int H,
                 std::size_t site, int hour) {
    double eta = coef[site];
    for (int j = 1; j <= H; ++j) {
        const double ang = two_pi * j * hour / 24.0;
        eta += coef[p + 2 * (j - 1)] * std::cos(ang);
        eta += coef[p + 2 * (j - 1) + 1] * std::sin(ang);
    }
    return eta;
}

double grouped_loglik(const GroupedCounts& g, const std::vector<double>& coef, int H) {
    double ll = 0.0;
    for (std::size_t i = 0; i < g.p; ++i) {
        for (int h = 1; h <= 24; ++h) {
            const double n = g.trials[i][h - 1];
            if (n == 0.0) continue;
            const double y = g.wet[i][h - 1];
            const double eta = predictor(coef, g.p, H, i, h);
            // y*log(mu) + (n-y)*log(1-mu) in a cancellation-safe form.
            const double log_mu = eta >= 0.0 ? -std::log1p(std::exp(-eta))
                                             : eta - std::log1p(std::exp(eta));
            const double log_1m = eta >= 0.0 ? -eta - std::log1p(std::exp(-eta))
                                             : -std::log1p(std::exp(eta));
            ll += y * log_mu + (n - y) * log_1m;
        }
    }
    return ll;
}

} // namespace

LogisticFit fit_logistic_harmonics(const OccurrenceField& occ, int H) {
    if (H < 0) throw std::invalid_argument("fit_logistic_harmonics: H must be >= 0");
    if (occ.n_sites == 0 || occ.n_steps == 0) {
        throw std::invalid_argument("fit_logistic_harmonics: empty occurrence field");
    }
    if (occ.step_minutes <= 0) {
        throw std::invalid_argument("fit_logistic_harmonics: occurrence field lacks step metadata");
    }
    const GroupedCounts g = group_by_hour(occ);
    const std::size_t p = g.p;

    // Separation pre-check on the intercept direction.
    for (std::size_t i = 0; i < p; ++i) {
        double n = 0.0, y = 0.0;
        for (int h = 0; h < 24; ++h) {
            n += g.trials[i][h];
            y += g.wet[i][h];
        }
        if (y == 0.0 || y == n) {
            throw std::runtime_error("fit_logistic_harmonics: perfect separation (site index " +
                                     std::to_string(i) + " is all-" +
                                     (y == 0.0 ? std::string("dry") : std::string("wet")) + ")");
        }
    }

    const std::size_t dim = p + 2 * static_cast<std::size_t>(H);
    std::vector<double> coef(dim, 0.0);
    // Intercepts start at the empirical logits; harmonics at zero.
    for (std::size_t i = 0; i < p; ++i) {
        double n = 0.0, y = 0.0;
        for (int h = 0; h < 24; ++h) {
            n += g.trials[i][h];
            y += g.wet[i][h];
        }
        const double q = y / n;
        coef[i] = std::log(q / (1.0 - q));
    }

    LogisticFit fit;
    double ll_prev = grouped_loglik(g, coef, H);
    Matrix xtwx;
    std::vector<double> xtwz;
    std::vector<double> xrow(dim);
    bool converged = false;

    for (int iter = 1; iter <= 100; ++iter) {
        xtwx = Matrix(dim, dim);
        xtwz.assign(dim, 0.0);

        for (std::size_t i = 0; i < p; ++i) {
            for (int h = 1; h <= 24; ++h) {
                const double n = g.trials[i][h - 1];
                if (n == 0.0) continue;
                const double y = g.wet[i][h - 1];
                const double eta = predictor(coef, p, H, i, h);
                const double mu = inv_logit(eta);
                const double w = n * mu * (1.0 - mu);
                // Working response times weight: w*eta + (y - n*mu).
                const double wz = w * eta + (y - n * mu);

                std::fill(xrow.begin(), xrow.end(), 0.0);
                xrow[i] = 1.0;
                for (int j = 1; j <= H; ++j) {
                    const double ang = two_pi * j * h / 24.0;
                    xrow[p + 2 * (j - 1)] = std::cos(ang);
                    xrow[p + 2 * (j - 1) + 1] = std::sin(ang);
                }
                for (std::size_t r = 0; r < dim; ++r) {
                    if (xrow[r] == 0.0) continue;
                    xtwz[r] += xrow[r] * wz;
                    for (std::size_t cI = r; cI < dim; ++cI) {
                        if (xrow[cI] == 0.0) continue;
                        xtwx(r, cI) += w * xrow[r] * xrow[cI];
                    }
                }
            }
        }
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t cI = 0; cI < r; ++cI) xtwx(r, cI) = xtwx(cI, r);
        }

        try {
            coef = solve_spd(xtwx, xtwz);
        } catch (const std::exception&) {
            // Near-separation with rare events makes the weighted normal
            // equations singular; a tiny ridge keeps IRLS moving.
            for (std::size_t r = 0; r < dim; ++r) xtwx(r, r) += 1e-8;
            coef = solve_spd(xtwx, xtwz);
            fit.ridged = true;
        }

        for (double v : coef) {
            if (!std::isfinite(v) || std::fabs(v) > 50.0) {
                throw std::runtime_error(
                    "fit_logistic_harmonics: coefficients diverging (|coef| > 50), "
                    "perfect separation in a harmonic pattern suspected");
            }
        }

        const double ll = grouped_loglik(g, coef, H);
        fit.iterations = iter;
        if (std::fabs(ll - ll_prev) <= 1e-9 * (std::fabs(ll_prev) + 1.0)) {
            ll_prev = ll;
            converged = true;
            break;
        }
        ll_prev = ll;
    }
    if (!converged) {
        throw std::runtime_error("fit_logistic_harmonics: IRLS did not converge in 100 iterations"
                                 " (last loglik " + std::to_string(ll_prev) + ")");
    }

    fit.loglik = ll_prev;
    fit.model.H = H;
    fit.model.alpha.assign(coef.begin(), coef.begin() + static_cast<std::ptrdiff_t>(p));
    fit.model.beta1.resize(H);
    fit.model.beta2.resize(H);
    for (int j = 0; j < H; ++j) {
        fit.model.beta1[j] = coef[p + 2 * j];
        fit.model.beta2[j] = coef[p + 2 * j + 1];
    }

    // Asymptotic SEs from the inverse of the final information matrix.
    const Matrix l = cholesky(xtwx);
    fit.se.resize(dim);
    std::vector<double> e(dim, 0.0);
    for (std::size_t r = 0; r < dim; ++r) {
        std::fill(e.begin(), e.end(), 0.0);
        e[r] = 1.0;
        const std::vector<double> col = solve_upper_t(l, solve_lower(l, e));
        fit.se[r] = std::sqrt(col[r]);
    }
    return fit;
}

HSelection select_H(const OccurrenceField& occ, int H_max) {
    if (H_max < 0) throw std::invalid_argument("select_H: H_max must be >= 0");
    HSelection sel;
    double best_aic = std::numeric_limits<double>::infinity();
    bool any = false;
    std::string first_error;

    for (int H = 0; H <= H_max; ++H) {
        sel.tried.push_back(H);
        try {
            LogisticFit fit = fit_logistic_harmonics(occ, H);
            const double k = static_cast<double>(occ.n_sites) + 2.0 * H;
            const double aic = 2.0 * k - 2.0 * fit.loglik;
            sel.aic.push_back(aic);
            if (aic < best_aic) { // strict: ties keep the smaller H
                best_aic = aic;
                sel.best = std::move(fit);
                sel.H = H;
                any = true;
            }
        } catch (const std::exception& e) {
            sel.aic.push_back(std::numeric_limits<double>::quiet_NaN());
            sel.warnings.push_back("H=" + std::to_string(H) + " failed: " + e.what());
            if (first_error.empty()) first_error = e.what();
        }
    }
    if (!any) {
        throw std::runtime_error("select_H: every H in 0.." + std::to_string(H_max) +
                                 " failed; first error: " + first_error);
    }
    return sel;
}

double fitted_prob(const CutoffModel& model, std::size_t site, int hour) {
    if (site >= model.alpha.size()) throw std::invalid_argument("fitted_prob: site out of range");
    if (hour < 1 || hour > 24) throw std::invalid_argument("fitted_prob: hour must be in 1..24");
    double eta = model.alpha[site];
    for (int j = 1; j <= model.H; ++j) {
        const double ang = two_pi * j * hour / model.period_hours;
        eta += model.beta1[j - 1] * std::cos(ang) + model.beta2[j - 1] * std::sin(ang);
    }
    return inv_logit(eta);
}

CutoffSurface cutoff_surface(const CutoffModel& model, std::size_t n_steps,
                             int step_minutes, std::int64_t origin, double nu) {
    const std::size_t p = model.alpha.size();
    CutoffSurface surf;
    surf.c = Matrix(p, n_steps);
    // Quantiles depend only on (site, hour): 24 per site, mapped onto t.
    Matrix by_hour(p, 24);
    for (std::size_t i = 0; i < p; ++i) {
        for (int h = 1; h <= 24; ++h) {
            by_hour(i, h - 1) = student_t_quantile(1.0 - fitted_prob(model, i, h), nu);
        }
    }
    const std::int64_t step_sec = std::int64_t{60} * step_minutes;
    for (std::size_t t = 0; t < n_steps; ++t) {
        const int h = hour_of_day(origin + static_cast<std::int64_t>(t) * step_sec);
        for (std::size_t i = 0; i < p; ++i) surf.c(i, t) = by_hour(i, h - 1);
    }
    return surf;
}

void write_cutoff_model_json(const std::string& path, const CutoffModel& model,
                             const std::vector<std::string>& site_ids,
                             double loglik,
                             const std::vector<std::string>& provenance) {
    nlohmann::json j;
    j["meta"] = provenance;
    j["H"] = model.H;
    j["period_hours"] = model.period_hours;
    j["nu_ref"] = std::isinf(model.nu_ref) ? nlohmann::json("inf") : nlohmann::json(model.nu_ref);
    j["site_ids"] = site_ids;
    j["alpha"] = model.alpha;
    j["beta1"] = model.beta1;
    j["beta2"] = model.beta2;
    j["loglik"] = loglik;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

CutoffModel read_cutoff_model_json(const std::string& path,
                                   std::vector<std::string>* site_ids) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    CutoffModel model;
    model.H = j.at("H").get<int>();
    model.period_hours = j.at("period_hours").get<double>();
    const auto& nu = j.at("nu_ref");
    model.nu_ref = nu.is_string() ? std::numeric_limits<double>::infinity()
                                  : nu.get<double>();
    model.alpha = j.at("alpha").get<std::vector<double>>();
    model.beta1 = j.at("beta1").get<std::vector<double>>();
    model.beta2 = j.at("beta2").get<std::vector<double>>();
    if (site_ids) *site_ids = j.at("site_ids").get<std::vector<std::string>>();
    return model;
}

} // namespace trf

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trf/gauge.hpp"
#include "trf/matrix.hpp"
#include "trf/simulation.hpp"

namespace trf {

// Harmonic logistic model of the occurrence probability:
//   logit P(O=1 at site x, step t)
//     = alpha(x) + sum_{j=1..H} beta1_j cos(2 pi j h(t)/24) + beta2_j sin(...)
// with h(t) the hour-of-day label 1..24 derived from the series origin.
struct CutoffModel {
    std::vector<double> alpha;        // per-site intercepts
    std::vector<double> beta1, beta2; // length H
    int H = 0;
    double period_hours = 24.0;
    double nu_ref = 0.0;              // degrees of freedom used for quantiles
};

struct LogisticFit {
    CutoffModel model;
    double loglik = 0.0;
    int iterations = 0;
    bool ridged = false;              // singular normal equations hit the ridge fallback
    std::vector<double> se;           // asymptotic SEs, packed like coefficients
};

// Coefficient packing order shared by LogisticFit::se:
// [alpha_0..alpha_{p-1}, beta1_1, beta2_1, ..., beta1_H, beta2_H].

// Maximum-likelihood fit by IRLS on per-(site, hour) grouped counts;
// converges when the relative log-likelihood change drops below 1e-9, at
// most 100 iterations.  Perfect separation (an all-wet/all-dry site, or
// diverging coefficients) raises std::runtime_error naming the pattern.
LogisticFit fit_logistic_harmonics(const OccurrenceField& occ, int H);

struct HSelection {
    LogisticFit best;
    int H = 0;
    std::vector<int> tried;           // H values attempted
    std::vector<double> aic;          // aligned with tried; NaN where the fit failed
    std::vector<std::string> warnings;
};

// AIC = 2k - 2 loglik with k = #sites + 2H over H = 0..H_max; ties pick the
// smaller H.  Individual fit failures are skipped with a warning; if every
// H fails the error propagates.
HSelection select_H(const OccurrenceField& occ, int H_max);

double fitted_prob(const CutoffModel& model, std::size_t site, int hour);

// c(x,t) = Quantile_{t_nu or normal}(1 - p_hat(x, h(t))).
CutoffSurface cutoff_surface(const CutoffModel& model, std::size_t n_steps,
                             int step_minutes, std::int64_t origin, double nu);

// JSON round-trip for fitted models.
void write_cutoff_model_json(const std::string& path, const CutoffModel& model,
                             const std::vector<std::string>& site_ids,
                             double loglik,
                             const std::vector<std::string>& provenance);
CutoffModel read_cutoff_model_json(const std::string& path,
                                   std::vector<std::string>* site_ids = nullptr);

} // namespace trf

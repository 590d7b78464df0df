#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "trf/covariance.hpp"
#include "trf/gauge.hpp"
#include "trf/occurrence_stats.hpp"
#include "trf/optimize.hpp"
#include "trf/seasonal_cutoff.hpp"

namespace trf {

struct Theta {
    double alpha = 0.5;   // spatial range, fraction of d_max
    double beta = 0.5;    // temporal long-range exponent
    double alpha_u = 0.2; // scaling-process range, fraction of n_steps
    double nu = 3.0;      // degrees of freedom (infinity under ModelKind::grf)
};

enum class ModelKind { trf, grf };

struct CriterionSpec {
    std::size_t M = 50;         // replications per evaluation
    CondProbTable obs;          // observed conditional-probability table
    std::uint64_t seed_base = 0;
};

// Everything the simulation side of one criterion evaluation needs.  The
// cutoff is fixed here (never co-estimated): either a seasonal model whose
// quantiles are re-derived for each candidate nu, or a flat dry probability.
struct FitContext {
    GaugeNetwork network;
    SpaceTimeCovSpec cov_template; // eta/L/a/c taken as-is; alpha/beta overridden
    std::size_t n_steps = 0;
    std::optional<CutoffModel> cutoff_model;
    double flat_p_dry = 0.975;
    int step_minutes = 15;
    std::int64_t origin = 0;
    int threads = 1;
};

struct CriterionDiag {
    std::size_t degenerate_replications = 0; // contributed 0 with a warning count
};

// The weighted conditional-probability criterion: M common-random-number
// replications under theta, each compared to the observed table through
// availability-weighted squared differences of phi_D and phi_R, averaged.
// Deterministic for fixed (theta, seed_base).  Throws when every
// replication is degenerate.
double criterion(const Theta& theta, ModelKind kind, const FitContext& ctx,
                 const CriterionSpec& spec, CriterionDiag* diag = nullptr);

// One replication's term, exposed for tests: availability-aware weights
// w_j = n_j / sum_j n_j per block, site normalizers m1 (dry) and m2 (rain).
double criterion_replication_term(const CondProbTable& sim, const CondProbTable& obs,
                                  bool& degenerate);

struct FitBounds {
    double lo = 0.0, hi = 1.0;
};

struct FitOptions {
    std::vector<int> nu_grid{2, 3, 4, 5, 6, 7, 8, 9, 10};
    FitBounds alpha{0.1, 1.5};
    FitBounds beta{0.0, 0.9};
    FitBounds alpha_u{0.02, 0.6};
    NelderMeadOptions nm{};
};

struct NuTrace {
    double nu = 0.0;
    Theta theta;
    double value = 0.0;
    int evals = 0;
    bool converged = false;
    int reflections = 0;
};

struct FitResult {
    Theta theta;
    double value = 0.0;
    std::vector<NuTrace> trace; // one entry per nu candidate
    int total_evals = 0;
    int reflections_into_bounds = 0;
    std::size_t degenerate_replications = 0; // summed over all evaluations
};

// Nelder-Mead over (alpha, beta, alpha_u) per nu in nu_grid (tRF), or a
// single run over (alpha, beta) with nu = infinity (GRF).
FitResult fit(const FitContext& ctx, const CriterionSpec& spec, ModelKind kind,
              const FitOptions& opt = {});

// Range matching for the GRF comparison experiment: pick alpha so the
// GRF's MC-estimated psi(0) and psi(p) match the supplied targets, in
// least squares standardized by the targets' standard errors.
struct MatchTargets {
    double psi0 = 0.0, psip = 0.0; // target probabilities
    double se0 = 0.0, sep = 0.0;   // their SEs (<= 0 means unit weight)
};

struct MatchResult {
    double alpha_matched = 0.0;
    double psi0_achieved = 0.0, psip_achieved = 0.0;
    double objective = 0.0;
    bool boundary_warning = false;
    int evals = 0;
};

MatchResult match_grf_range(const GaugeNetwork& network, double eta, double p_dry,
                            const MatchTargets& targets, std::size_t mc_budget,
                            std::uint64_t seed, FitBounds alpha_bounds);

} // namespace trf

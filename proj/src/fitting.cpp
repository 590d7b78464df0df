#include "trf/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trf/parallel.hpp"
#include "trf/rng.hpp"
#include "trf/simulation.hpp"
#include "trf/special.hpp"

namespace trf {

namespace {

struct BlockTerm {
    double value = 0.0;
    bool empty = true;
};

BlockTerm block_term(const Matrix& sim_phi, const Matrix& sim_counts,
                     const Matrix& obs_phi, const Matrix& obs_counts) {
    const std::size_t p = sim_phi.rows();
    BlockTerm out;

    // Availability of a difference term needs both tables; weights are the
    // per-j counts of available terms, normalized within the block.
    std::vector<double> n_j(p, 0.0);
    double total = 0.0;
    for (std::size_t j = 1; j < p; ++j) {
        for (std::size_t i = 0; i < p; ++i) {
            if (sim_counts(i, j) > 0 && obs_counts(i, j) > 0) n_j[j] += 1.0;
        }
        total += n_j[j];
    }
    if (total == 0.0) return out;

    std::size_t m = 0;
    double acc = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        bool any = false;
        for (std::size_t j = 1; j < p; ++j) {
            if (sim_counts(i, j) > 0 && obs_counts(i, j) > 0) {
                const double w = n_j[j] / total;
                const double d = sim_phi(i, j) - obs_phi(i, j);
                acc += w * d * d;
                any = true;
            }
        }
        if (any) ++m;
    }
    out.value = acc / static_cast<double>(m);
    out.empty = false;
    return out;
}

} // namespace

double criterion_replication_term(const CondProbTable& sim, const CondProbTable& obs,
                                  bool& degenerate) {
    const BlockTerm dry = block_term(sim.phi_d, sim.counts_d, obs.phi_d, obs.counts_d);
    const BlockTerm rain = block_term(sim.phi_r, sim.counts_r, obs.phi_r, obs.counts_r);
    degenerate = dry.empty && rain.empty;
    return (dry.empty ? 0.0 : dry.value) + (rain.empty ? 0.0 : rain.value);
}

double criterion(const Theta& theta, ModelKind kind, const FitContext& ctx,
                 const CriterionSpec& spec, CriterionDiag* diag) {
    if (spec.M < 1) throw std::invalid_argument("criterion: M must be >= 1");
    if (spec.obs.n_sites() != ctx.network.size()) {
        throw std::invalid_argument("criterion: observed table does not match network");
    }
    const double nu_eff = kind == ModelKind::grf
        ? std::numeric_limits<double>::infinity()
        : theta.nu;

    SpaceTimeCovSpec cov = ctx.cov_template;
    cov.matern.range = theta.alpha;
    cov.beta = theta.beta;

    const GaussianMtsSynthesizer synth_z(ctx.network, cov, ctx.n_steps);
    std::optional<ScalingSynthesizer> synth_u;
    if (!std::isinf(nu_eff)) {
        synth_u.emplace(ctx.n_steps, theta.alpha_u * static_cast<double>(ctx.n_steps));
    }

    std::optional<CutoffSurface> surface;
    double flat_cutoff = 0.0;
    if (ctx.cutoff_model) {
        surface = cutoff_surface(*ctx.cutoff_model, ctx.n_steps, ctx.step_minutes,
                                 ctx.origin, nu_eff);
    } else {
        flat_cutoff = marginal_cutoff(ctx.flat_p_dry, nu_eff);
    }

    std::vector<CondProbTable> tables(spec.M);
    parallel_for(spec.M, ctx.threads, [&](std::size_t k) {
        RngStream z_rng(substream_key(spec.seed_base, k, stream_z));
        LatentField field{synth_z.draw(z_rng), FieldKind::gaussian, nu_eff};
        if (synth_u) {
            const std::vector<double> u =
                synth_u->draw_u(spec.seed_base, k, static_cast<int>(nu_eff));
            field.kind = FieldKind::t;
            for (std::size_t i = 0; i < field.y.rows(); ++i) {
                double* row = field.y.row(i);
                for (std::size_t t = 0; t < field.y.cols(); ++t) row[t] /= u[t];
            }
        }
        const OccurrenceField occ = surface
            ? threshold_occurrence(field, *surface, ctx.step_minutes, ctx.origin)
            : threshold_occurrence(field, flat_cutoff, ctx.step_minutes, ctx.origin);
        tables[k] = cond_prob_table(occ, ctx.network);
    });

    double acc = 0.0;
    std::size_t degenerate_count = 0;
    for (std::size_t k = 0; k < spec.M; ++k) {
        bool degenerate = false;
        acc += criterion_replication_term(tables[k], spec.obs, degenerate);
        if (degenerate) ++degenerate_count;
    }
    if (degenerate_count == spec.M) {
        throw std::runtime_error("criterion: every replication degenerate (no available terms)");
    }
    if (diag) diag->degenerate_replications += degenerate_count;
    return acc / static_cast<double>(spec.M);
}

namespace {

Theta theta_from_unit(const std::vector<double>& x, double nu, ModelKind kind,
                      const FitOptions& opt) {
    Theta th;
    th.alpha = opt.alpha.lo + x[0] * (opt.alpha.hi - opt.alpha.lo);
    th.beta = opt.beta.lo + x[1] * (opt.beta.hi - opt.beta.lo);
    th.alpha_u = kind == ModelKind::trf
        ? opt.alpha_u.lo + x[2] * (opt.alpha_u.hi - opt.alpha_u.lo)
        : 0.0;
    th.nu = nu;
    return th;
}

} // namespace

FitResult fit(const FitContext& ctx, const CriterionSpec& spec, ModelKind kind,
              const FitOptions& opt) {
    std::vector<double> nu_values;
    if (kind == ModelKind::trf) {
        if (opt.nu_grid.empty()) throw std::invalid_argument("fit: empty nu grid");
        for (int nu : opt.nu_grid) nu_values.push_back(static_cast<double>(nu));
    } else {
        nu_values.push_back(std::numeric_limits<double>::infinity());
    }

    FitResult result;
    result.value = std::numeric_limits<double>::infinity();
    CriterionDiag diag;

    for (const double nu : nu_values) {
        const std::size_t dim = kind == ModelKind::trf ? 3 : 2;
        auto objective = [&](const std::vector<double>& x) {
            return criterion(theta_from_unit(x, nu, kind, opt), kind, ctx, spec, &diag);
        };
        const NelderMeadResult nm =
            nelder_mead(objective, std::vector<double>(dim, 0.5), opt.nm);

        NuTrace trace;
        trace.nu = nu;
        trace.theta = theta_from_unit(nm.x, nu, kind, opt);
        trace.value = nm.fx;
        trace.evals = nm.evals;
        trace.converged = nm.converged;
        trace.reflections = nm.reflections_into_bounds;
        result.trace.push_back(trace);
        result.total_evals += nm.evals;
        result.reflections_into_bounds += nm.reflections_into_bounds;

        if (nm.fx < result.value) {
            result.value = nm.fx;
            result.theta = trace.theta;
        }
    }
    result.degenerate_replications = diag.degenerate_replications;
    return result;
}

MatchResult match_grf_range(const GaugeNetwork& network, double eta, double p_dry,
                            const MatchTargets& targets, std::size_t mc_budget,
                            std::uint64_t seed, FitBounds alpha_bounds) {
    if (mc_budget < 1) throw std::invalid_argument("match_grf_range: empty MC budget");
    if (!(alpha_bounds.hi > alpha_bounds.lo)) {
        throw std::invalid_argument("match_grf_range: invalid alpha bounds");
    }
    const double cutoff = student_t_quantile(p_dry, std::numeric_limits<double>::infinity());
    const double s0 = targets.se0 > 0.0 ? targets.se0 : 1.0;
    const double sp = targets.sep > 0.0 ? targets.sep : 1.0;
    const std::size_t p = network.size();

    MatchResult res;
    double psi0_at = 0.0, psip_at = 0.0;

    auto psi_pair = [&](double alpha) {
        MaternSpec matern{eta, alpha, 1.0};
        const LatentField field = simulate_spatial_trf(
            network, matern, std::numeric_limits<double>::infinity(), mc_budget, seed);
        std::size_t all_dry = 0, all_wet = 0;
        for (std::size_t rep = 0; rep < mc_budget; ++rep) {
            std::size_t wet = 0;
            for (std::size_t i = 0; i < p; ++i) {
                if (field.y(i, rep) > cutoff) ++wet;
            }
            if (wet == 0) ++all_dry;
            if (wet == p) ++all_wet;
        }
        psi0_at = static_cast<double>(all_dry) / static_cast<double>(mc_budget);
        psip_at = static_cast<double>(all_wet) / static_cast<double>(mc_budget);
    };

    auto objective = [&](double alpha) {
        psi_pair(alpha);
        ++res.evals;
        const double d0 = (psi0_at - targets.psi0) / s0;
        const double dp = (psip_at - targets.psip) / sp;
        return d0 * d0 + dp * dp;
    };

    // Coarse deterministic scan to bracket the optimum, then golden section.
    const int scan_points = 17;
    double best_x = alpha_bounds.lo;
    double best_f = std::numeric_limits<double>::infinity();
    int best_idx = 0;
    const double width = alpha_bounds.hi - alpha_bounds.lo;
    for (int i = 0; i < scan_points; ++i) {
        const double x = alpha_bounds.lo + width * i / (scan_points - 1.0);
        const double fx = objective(x);
        if (fx < best_f) {
            best_f = fx;
            best_x = x;
            best_idx = i;
        }
    }
    const double lo = alpha_bounds.lo +
        width * std::max(0, best_idx - 1) / (scan_points - 1.0);
    const double hi = alpha_bounds.lo +
        width * std::min(scan_points - 1, best_idx + 1) / (scan_points - 1.0);
    const GoldenResult gold = golden_minimize(objective, lo, hi, 1e-4 * width, 80);

    if (gold.fx <= best_f) {
        res.alpha_matched = gold.x;
        res.objective = gold.fx;
    } else {
        res.alpha_matched = best_x;
        res.objective = best_f;
    }
    psi_pair(res.alpha_matched);
    res.psi0_achieved = psi0_at;
    res.psip_achieved = psip_at;
    res.boundary_warning =
        res.alpha_matched - alpha_bounds.lo < 2e-4 * width ||
        alpha_bounds.hi - res.alpha_matched < 2e-4 * width;
    return res;
}

} // namespace trf

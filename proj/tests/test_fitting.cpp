#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "trf/fitting.hpp"
#include "trf/rng.hpp"
#include "trf/simulation.hpp"

using namespace trf;

namespace {

CondProbTable blank_table(std::size_t p) {
    CondProbTable t;
    t.phi_d = Matrix(p, p);
    t.phi_r = Matrix(p, p);
    t.counts_d = Matrix(p, p);
    t.counts_r = Matrix(p, p);
    return t;
}

GaugeNetwork small_network(std::size_t n) {
    std::vector<Site> sites;
    for (std::size_t i = 0; i < n; ++i) {
        sites.push_back({"s" + std::to_string(i), 35.0 + 0.05 * static_cast<double>(i),
                         -97.0 + 0.03 * static_cast<double>(i % 3)});
    }
    return network_from_coords(sites);
}

} // namespace

TEST_CASE("replication term: two-site dry block by hand") {
    // phi_D differences 0.2 and 0.3 at j = 1, both sites available:
    // n_1 = 2, w_1 = 1, m = 2 -> (0.04 + 0.09) / 2 = 0.065.
    CondProbTable sim = blank_table(2);
    CondProbTable obs = blank_table(2);
    sim.phi_d(0, 1) = 0.8; obs.phi_d(0, 1) = 0.6;
    sim.phi_d(1, 1) = 0.7; obs.phi_d(1, 1) = 0.4;
    sim.counts_d(0, 1) = 5; obs.counts_d(0, 1) = 9;
    sim.counts_d(1, 1) = 4; obs.counts_d(1, 1) = 7;

    bool degenerate = true;
    const double only_dry = criterion_replication_term(sim, obs, degenerate);
    CHECK(only_dry == doctest::Approx(0.065).epsilon(1e-14));
    CHECK_FALSE(degenerate);

    // Add a rain block available at site 0 only: one term (0.5 - 0.3)^2
    // with w_1 = 1 and m = 1 adds 0.04.
    sim.phi_r(0, 1) = 0.5; obs.phi_r(0, 1) = 0.3;
    sim.counts_r(0, 1) = 3; obs.counts_r(0, 1) = 2;
    // site 1 counted in neither table even though one side has data
    sim.phi_r(1, 1) = 0.9; sim.counts_r(1, 1) = 6; // obs side stays 0
    const double both = criterion_replication_term(sim, obs, degenerate);
    CHECK(both == doctest::Approx(0.105).epsilon(1e-14));
    CHECK_FALSE(degenerate);
}

TEST_CASE("replication term: three-site weighting by hand") {
    // j = 1 available at all 3 sites (diffs 0.2, 0.3, 0.1); j = 2 only at
    // site 1 (diff 0.4).  n = (3, 1), w = (3/4, 1/4), m = 3:
    //   value = [0.75 * 0.14 + 0.25 * 0.16] / 3 = 0.145 / 3.
    CondProbTable sim = blank_table(3);
    CondProbTable obs = blank_table(3);
    const double sim1[3] = {0.9, 0.8, 0.6};
    const double obs1[3] = {0.7, 0.5, 0.5};
    for (std::size_t i = 0; i < 3; ++i) {
        sim.phi_d(i, 1) = sim1[i];
        obs.phi_d(i, 1) = obs1[i];
        sim.counts_d(i, 1) = 10;
        obs.counts_d(i, 1) = 10;
    }
    sim.phi_d(1, 2) = 0.9; obs.phi_d(1, 2) = 0.5;
    sim.counts_d(1, 2) = 2; obs.counts_d(1, 2) = 3;

    bool degenerate = true;
    const double value = criterion_replication_term(sim, obs, degenerate);
    CHECK(value == doctest::Approx(0.145 / 3.0).epsilon(1e-14));
    CHECK_FALSE(degenerate);
}

TEST_CASE("replication term: no shared availability is degenerate, not zero-difference") {
    CondProbTable sim = blank_table(2);
    CondProbTable obs = blank_table(2);
    // marginals (j = 0) available everywhere; they never enter the term
    for (std::size_t i = 0; i < 2; ++i) {
        sim.counts_d(i, 0) = 50; obs.counts_d(i, 0) = 50;
        sim.counts_r(i, 0) = 50; obs.counts_r(i, 0) = 50;
        sim.phi_d(i, 0) = 0.9; obs.phi_d(i, 0) = 0.1;
    }
    bool degenerate = false;
    const double value = criterion_replication_term(sim, obs, degenerate);
    CHECK(value == 0.0);
    CHECK(degenerate);
}

TEST_CASE("criterion argument validation") {
    FitContext ctx;
    ctx.network = small_network(3);
    ctx.n_steps = 64;
    ctx.flat_p_dry = 0.9;

    CriterionSpec spec;
    spec.obs = blank_table(3);
    spec.M = 0;
    CHECK_THROWS_AS(criterion(Theta{}, ModelKind::trf, ctx, spec), std::invalid_argument);

    spec.M = 2;
    spec.obs = blank_table(4); // wrong site count
    CHECK_THROWS_AS(criterion(Theta{}, ModelKind::trf, ctx, spec), std::invalid_argument);
}

TEST_CASE("criterion throws when every replication is degenerate") {
    FitContext ctx;
    ctx.network = small_network(3);
    ctx.n_steps = 64;
    ctx.flat_p_dry = 0.9;

    CriterionSpec spec;
    spec.M = 2;
    spec.obs = blank_table(3); // all counts zero -> nothing is ever shared
    spec.seed_base = 11;
    CHECK_THROWS_AS(criterion(Theta{}, ModelKind::trf, ctx, spec), std::runtime_error);
}

TEST_CASE("criterion is deterministic in (theta, seed) and common-random-number exact") {
    FitContext ctx;
    ctx.network = small_network(4);
    ctx.n_steps = 256;
    ctx.flat_p_dry = 0.9;
    ctx.threads = 1;

    const Theta theta{0.5, 0.3, 0.2, 3.0};
    const std::uint64_t seed_base = 20260823;

    // Rebuild replication 0 of the criterion's own simulation path and use
    // its table as the observation: the first replication then matches the
    // observation bitwise, so its term is exactly zero.
    SpaceTimeCovSpec cov;
    cov.matern.range = theta.alpha;
    cov.beta = theta.beta;
    const GaussianMtsSynthesizer synth(ctx.network, cov, ctx.n_steps);
    const ScalingSynthesizer scaling(ctx.n_steps,
                                     theta.alpha_u * static_cast<double>(ctx.n_steps));
    RngStream z_rng(substream_key(seed_base, 0, stream_z));
    LatentField field{synth.draw(z_rng), FieldKind::t, theta.nu};
    const std::vector<double> u = scaling.draw_u(seed_base, 0, 3);
    for (std::size_t i = 0; i < field.y.rows(); ++i) {
        for (std::size_t t = 0; t < field.y.cols(); ++t) field.y(i, t) /= u[t];
    }
    const OccurrenceField occ =
        threshold_occurrence(field, marginal_cutoff(ctx.flat_p_dry, theta.nu),
                             ctx.step_minutes, ctx.origin);

    CriterionSpec spec;
    spec.M = 1;
    spec.obs = cond_prob_table(occ, ctx.network);
    spec.seed_base = seed_base;

    CriterionDiag diag;
    const double self = criterion(theta, ModelKind::trf, ctx, spec, &diag);
    CHECK(self == 0.0);
    CHECK(diag.degenerate_replications == 0);

    spec.M = 3;
    const double v1 = criterion(theta, ModelKind::trf, ctx, spec);
    const double v2 = criterion(theta, ModelKind::trf, ctx, spec);
    CHECK(v1 == v2); // bitwise

    ctx.threads = 2;
    const double v_parallel = criterion(theta, ModelKind::trf, ctx, spec);
    CHECK(v_parallel == v1); // worker count cannot change the value

    spec.seed_base = seed_base + 1;
    ctx.threads = 1;
    const double v3 = criterion(theta, ModelKind::trf, ctx, spec);
    CHECK(v3 != v1);
    CHECK(v3 > 0.0);
}

TEST_CASE("criterion under the Gaussian model ignores alpha_u") {
    FitContext ctx;
    ctx.network = small_network(3);
    ctx.n_steps = 128;
    ctx.flat_p_dry = 0.9;

    // build a non-degenerate observation from a Gaussian run
    SimConfig sim;
    sim.network = ctx.network;
    sim.n_steps = ctx.n_steps;
    sim.nu = std::numeric_limits<double>::infinity();
    sim.seed = 7;
    const LatentField f = simulate_trf(sim, 0);
    const OccurrenceField occ = threshold_occurrence(
        f, marginal_cutoff(ctx.flat_p_dry, std::numeric_limits<double>::infinity()));

    CriterionSpec spec;
    spec.M = 2;
    spec.obs = cond_prob_table(occ, ctx.network);
    spec.seed_base = 3;

    Theta a{0.5, 0.3, 0.1, 3.0};
    Theta b{0.5, 0.3, 0.55, 3.0};
    const double va = criterion(a, ModelKind::grf, ctx, spec);
    const double vb = criterion(b, ModelKind::grf, ctx, spec);
    CHECK(va == vb);
}

TEST_CASE("nelder_mead finds an interior quadratic minimum") {
    const std::vector<double> target{0.3, 0.7};
    int calls = 0;
    auto f = [&](const std::vector<double>& x) {
        ++calls;
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += (x[i] - target[i]) * (x[i] - target[i]);
        }
        return s;
    };
    NelderMeadOptions opt;
    opt.diameter_tol = 1e-5;
    const NelderMeadResult res = nelder_mead(f, {0.5, 0.5}, opt);
    CHECK(res.converged);
    CHECK(res.evals == calls);
    CHECK(res.evals <= opt.max_evals);
    CHECK(std::abs(res.x[0] - 0.3) < 2e-3);
    CHECK(std::abs(res.x[1] - 0.7) < 2e-3);
    CHECK(res.fx < 1e-5);
}

TEST_CASE("nelder_mead reflects proposals at the unit box") {
    // minimum outside the box: best feasible point is the x = 1 face
    auto f = [](const std::vector<double>& x) {
        return (x[0] - 1.3) * (x[0] - 1.3) + (x[1] - 0.5) * (x[1] - 0.5);
    };
    NelderMeadOptions opt;
    opt.diameter_tol = 1e-5;
    const NelderMeadResult res = nelder_mead(f, {0.5, 0.5}, opt);
    CHECK(res.x[0] > 0.98);
    CHECK(res.x[0] <= 1.0);
    CHECK(res.reflections_into_bounds > 0);

    NelderMeadOptions tiny;
    tiny.max_evals = 5;
    const NelderMeadResult stopped = nelder_mead(f, {0.5, 0.5}, tiny);
    CHECK_FALSE(stopped.converged);
    CHECK(stopped.evals <= 5 + 3); // may finish the current simplex operation
}

TEST_CASE("golden_minimize on a quadratic") {
    auto f = [](double x) { return (x - 2.5) * (x - 2.5) + 1.0; };
    const GoldenResult res = golden_minimize(f, 0.0, 4.0, 1e-5);
    CHECK(std::abs(res.x - 2.5) < 1e-4);
    CHECK(res.fx == doctest::Approx(1.0).epsilon(1e-6));
    const GoldenResult res2 = golden_minimize(f, 0.0, 4.0, 1e-5);
    CHECK(res.x == res2.x);
    CHECK(res.evals == res2.evals);
}

TEST_CASE("fit runs a small end-to-end estimation") {
    FitContext ctx;
    ctx.network = small_network(4);
    ctx.n_steps = 240;
    ctx.flat_p_dry = 0.9;

    // observation: one tRF realization at a known theta
    SimConfig sim;
    sim.network = ctx.network;
    sim.n_steps = ctx.n_steps;
    sim.cov.matern.range = 0.5;
    sim.cov.beta = 0.4;
    sim.alpha_u = 0.2;
    sim.nu = 3.0;
    sim.seed = 404;
    const LatentField f = simulate_trf(sim, 0);
    const OccurrenceField occ =
        threshold_occurrence(f, marginal_cutoff(ctx.flat_p_dry, 3.0));

    CriterionSpec spec;
    spec.M = 4;
    spec.obs = cond_prob_table(occ, ctx.network);
    spec.seed_base = 99;

    FitOptions opt;
    opt.nu_grid = {3};
    opt.nm.max_evals = 40;
    opt.nm.diameter_tol = 0.02;

    const FitResult res = fit(ctx, spec, ModelKind::trf, opt);
    REQUIRE(res.trace.size() == 1);
    CHECK(res.theta.nu == 3.0);
    CHECK(res.theta.alpha >= opt.alpha.lo);
    CHECK(res.theta.alpha <= opt.alpha.hi);
    CHECK(res.theta.beta >= opt.beta.lo);
    CHECK(res.theta.beta <= opt.beta.hi);
    CHECK(res.theta.alpha_u >= opt.alpha_u.lo);
    CHECK(res.theta.alpha_u <= opt.alpha_u.hi);
    CHECK(std::isfinite(res.value));
    CHECK(res.value >= 0.0);
    CHECK(res.value == res.trace[0].value);
    CHECK(res.total_evals == res.trace[0].evals);

    FitOptions empty = opt;
    empty.nu_grid = {};
    CHECK_THROWS_AS(fit(ctx, spec, ModelKind::trf, empty), std::invalid_argument);
}

TEST_CASE("match_grf_range recovers a self-generated target range") {
    const GaugeNetwork net = small_network(5);
    const double alpha_true = 0.6;
    const double p_dry = 0.9;
    const std::size_t budget = 4000;
    const std::uint64_t seed = 5150;

    // Targets from the same Gaussian sampler and seed the matcher uses, so
    // the objective is exactly zero at alpha_true.
    MaternSpec matern{1.0, alpha_true, 1.0};
    const LatentField field = simulate_spatial_trf(
        net, matern, std::numeric_limits<double>::infinity(), budget, seed);
    const double cutoff =
        marginal_cutoff(p_dry, std::numeric_limits<double>::infinity());
    std::size_t all_dry = 0, all_wet = 0;
    for (std::size_t rep = 0; rep < budget; ++rep) {
        std::size_t wet = 0;
        for (std::size_t i = 0; i < net.size(); ++i) {
            if (field.y(i, rep) > cutoff) ++wet;
        }
        if (wet == 0) ++all_dry;
        if (wet == net.size()) ++all_wet;
    }

    MatchTargets targets;
    targets.psi0 = static_cast<double>(all_dry) / static_cast<double>(budget);
    targets.psip = static_cast<double>(all_wet) / static_cast<double>(budget);
    targets.se0 = std::sqrt(targets.psi0 * (1.0 - targets.psi0) / budget);
    targets.sep = std::sqrt(std::max(targets.psip * (1.0 - targets.psip), 1e-6) / budget);

    const MatchResult res =
        match_grf_range(net, 1.0, p_dry, targets, budget, seed, FitBounds{0.1, 1.5});
    CHECK(std::abs(res.alpha_matched - alpha_true) < 0.08);
    CHECK(res.objective < 1e-4);
    CHECK(std::abs(res.psi0_achieved - targets.psi0) <= 3.0 * targets.se0 + 1e-12);
    CHECK_FALSE(res.boundary_warning);
    CHECK(res.evals > 17);

    const MatchResult res2 =
        match_grf_range(net, 1.0, p_dry, targets, budget, seed, FitBounds{0.1, 1.5});
    CHECK(res.alpha_matched == res2.alpha_matched);
    CHECK(res.objective == res2.objective);

    CHECK_THROWS_AS(match_grf_range(net, 1.0, p_dry, targets, 0, seed, FitBounds{0.1, 1.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(match_grf_range(net, 1.0, p_dry, targets, budget, seed, FitBounds{0.5, 0.5}),
                    std::invalid_argument);
}
